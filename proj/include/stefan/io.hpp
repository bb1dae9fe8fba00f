#ifndef STEFAN_IO_HPP
#define STEFAN_IO_HPP

#include "stefan/certify.hpp"
#include "stefan/profiles.hpp"
#include "stefan/reference_fd.hpp"
#include "stefan/stefan_ie.hpp"
#include "stefan/trajectory.hpp"

#include <string>
#include <vector>

namespace stefan {

inline constexpr const char* kArtifactVersion = "0.1.0";

// All floats are emitted with 17 significant digits so files round-trip
// bit-exactly.
std::string format_double(double v);

// Comment lines ("# key=value ...") prepended to every CSV.
struct FileHeader {
    std::string command;
    std::string config_hash;
    std::string law;
    std::string ktau;
};
std::string header_comment(const FileHeader& h);

void write_trajectory_csv(const std::string& path, const FreeBoundaryTrajectory& tr,
                          const FileHeader& h);
FreeBoundaryTrajectory read_trajectory_csv(const std::string& path);

void write_snapshot_csv(const std::string& path, const FieldSnapshot& snap, const FileHeader& h);

// `t,zbar,s,nu` table for the exact front.
void write_oracle_trajectory_csv(const std::string& path, const std::vector<double>& t,
                                 const std::vector<double>& zbar, const std::vector<double>& s,
                                 const std::vector<double>& nu, const FileHeader& h);

void write_certificate_csv(const std::string& path, const Certificate& cert, const FileHeader& h);
void write_certificate_report(const std::string& path, const Certificate& cert,
                              const ContractionStats* stats, const FileHeader& h);

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows,
                           const FileHeader& h);

void write_comparison_csv(const std::string& path, const TrajectoryComparison& cmp,
                          const FileHeader& h);

// Profile files: linearized CSV `z,psi,dpsi`, physical CSV `x,theta`, both
// with `# beta1=... beta2=... b=...` / `# ... b_bar=...` metadata comments.
void write_linearized_profile_csv(const std::string& path, const LinearizedProfile& p);
LinearizedProfile read_linearized_profile_csv(const std::string& path);
void write_physical_profile_csv(const std::string& path, const PhysicalProfile& p);
PhysicalProfile read_physical_profile_csv(const std::string& path);

} // namespace stefan

#endif
