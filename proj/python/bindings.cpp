#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stefan/certify.hpp"
#include "stefan/front_oracle.hpp"
#include "stefan/hodograph.hpp"
#include "stefan/kernel.hpp"
#include "stefan/profiles.hpp"
#include "stefan/reference_fd.hpp"
#include "stefan/stefan_ie.hpp"

namespace py = pybind11;
using namespace stefan;

PYBIND11_MODULE(_core, m)
{
    m.doc() = "One-phase Stefan solver for the nonlinear conduction equation "
              "theta_t/theta^2 = theta_xx via the linearizing transformation.";

    // kernel
    m.def("eval_K", &eval_K, py::arg("z"), py::arg("t"));
    m.def("eval_K_z", &eval_K_z, py::arg("z"), py::arg("t"));
    m.def("eval_K_t", &eval_K_t, py::arg("z"), py::arg("t"));
    m.def("layer_mass", &layer_mass, py::arg("a"), py::arg("z"), py::arg("t"));

    py::class_<SingularWeightRow>(m, "SingularWeightRow")
        .def_readonly("t_grid", &SingularWeightRow::t_grid)
        .def_readonly("target_t", &SingularWeightRow::target_t)
        .def_readonly("weights", &SingularWeightRow::weights);
    m.def("abel_row", &abel_row, py::arg("t_grid"), py::arg("target_t"));

    // profiles
    py::class_<PhysicalProfile>(m, "PhysicalProfile")
        .def(py::init<>())
        .def_readwrite("x", &PhysicalProfile::x)
        .def_readwrite("theta", &PhysicalProfile::theta)
        .def_readwrite("beta1", &PhysicalProfile::beta1)
        .def_readwrite("beta2", &PhysicalProfile::beta2)
        .def_readwrite("b", &PhysicalProfile::b);
    py::class_<LinearizedProfile>(m, "LinearizedProfile")
        .def(py::init<>())
        .def_readwrite("z", &LinearizedProfile::z)
        .def_readwrite("psi", &LinearizedProfile::psi)
        .def_readwrite("dpsi", &LinearizedProfile::dpsi)
        .def_readwrite("beta1", &LinearizedProfile::beta1)
        .def_readwrite("beta2", &LinearizedProfile::beta2)
        .def_readwrite("b_bar", &LinearizedProfile::b_bar);
    m.def("sample_front_profile", &sample_front_profile, py::arg("beta1"), py::arg("beta2"),
          py::arg("b_bar"), py::arg("z_min"), py::arg("h"));
    m.def("sample_cosine_profile", &sample_cosine_profile, py::arg("beta1"), py::arg("beta2"),
          py::arg("left"), py::arg("b_bar"), py::arg("z_min"), py::arg("h"));
    m.def("validate_physical", &validate_physical, py::arg("profile"), py::arg("profile_tol") = 1e-3);
    m.def("validate_linearized", &validate_linearized, py::arg("profile"),
          py::arg("profile_tol") = 1e-3, py::arg("deriv_rel_tol") = 5e-2);

    // hodograph
    m.def("z_from_x", &z_from_x, py::arg("profile"), py::arg("x"), py::arg("anchor"));
    m.def("x_from_z", &x_from_z, py::arg("profile"), py::arg("z"), py::arg("anchor"));
    m.def("h_of_s", &h_of_s, py::arg("profile"), py::arg("s"));
    m.def("transform_profile", &transform_profile, py::arg("profile"), py::arg("anchor"));
    m.def("x_from_z_parametric", &x_from_z_parametric, py::arg("snapshot"), py::arg("s_at_t"),
          py::arg("zbar_at_t"));
    m.def("compatibility_residual",
          [](const std::vector<FieldSnapshot>& snaps) { return compatibility_residual(snaps); },
          py::arg("snapshots"));

    // front oracle
    py::class_<FrontSolution>(m, "FrontSolution")
        .def_readonly("beta1", &FrontSolution::beta1)
        .def_readonly("beta2", &FrontSolution::beta2)
        .def_readonly("b_bar", &FrontSolution::b_bar)
        .def_readonly("V", &FrontSolution::V)
        .def_readonly("nu_const", &FrontSolution::nu_const)
        .def_readonly("s_dot", &FrontSolution::s_dot)
        .def_readonly("alpha", &FrontSolution::alpha);
    m.def("make_front", &make_front, py::arg("beta1"), py::arg("beta2"), py::arg("b_bar"));
    m.def("psi_front", &psi_front, py::arg("front"), py::arg("z"), py::arg("t"));
    m.def("zbar_front", &zbar_front, py::arg("front"), py::arg("t"));
    m.def("x_front", &x_front, py::arg("front"), py::arg("z"), py::arg("t"));
    m.def("consistency_residual", &consistency_residual, py::arg("front"));

    // solver
    py::enum_<BoundaryLaw>(m, "BoundaryLaw")
        .value("frozen_h", BoundaryLaw::frozen_h)
        .value("paper_h", BoundaryLaw::paper_h);
    py::enum_<KtauMode>(m, "KtauMode")
        .value("frozen", KtauMode::frozen)
        .value("retarded", KtauMode::retarded);
    py::class_<ProblemSpec>(m, "ProblemSpec")
        .def(py::init<>())
        .def_readwrite("profile", &ProblemSpec::profile)
        .def_readwrite("beta1", &ProblemSpec::beta1)
        .def_readwrite("beta2", &ProblemSpec::beta2)
        .def_readwrite("b", &ProblemSpec::b)
        .def_readwrite("law", &ProblemSpec::law)
        .def_readwrite("physical", &ProblemSpec::physical);
    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("dt", &SolverConfig::dt)
        .def_readwrite("t_end", &SolverConfig::t_end)
        .def_readwrite("picard_tol", &SolverConfig::picard_tol)
        .def_readwrite("picard_max", &SolverConfig::picard_max)
        .def_readwrite("z_tail", &SolverConfig::z_tail)
        .def_readwrite("ktau_mode", &SolverConfig::ktau_mode);
    py::class_<FreeBoundaryTrajectory>(m, "FreeBoundaryTrajectory")
        .def(py::init<>())
        .def_readwrite("times", &FreeBoundaryTrajectory::times)
        .def_readwrite("nu", &FreeBoundaryTrajectory::nu)
        .def_readwrite("zbar", &FreeBoundaryTrajectory::zbar)
        .def_readwrite("s", &FreeBoundaryTrajectory::s)
        .def_readwrite("picard_iters", &FreeBoundaryTrajectory::picard_iters);
    py::class_<FieldSnapshot>(m, "FieldSnapshot")
        .def(py::init<>())
        .def_readwrite("t", &FieldSnapshot::t)
        .def_readwrite("z", &FieldSnapshot::z)
        .def_readwrite("psi", &FieldSnapshot::psi)
        .def_readwrite("x", &FieldSnapshot::x)
        .def_readwrite("theta", &FieldSnapshot::theta);

    m.def("solve", &solve, py::arg("spec"), py::arg("config"));
    m.def("rhs_nu", &rhs_nu, py::arg("history"), py::arg("trial_nu"), py::arg("trial_zbar"),
          py::arg("t"), py::arg("spec"), py::arg("config"));
    m.def("reconstruct_field", &reconstruct_field, py::arg("trajectory"), py::arg("spec"),
          py::arg("t"), py::arg("z_grid"), py::arg("parametric") = true);
    m.def("apply_operator",
          [](const ProblemSpec& spec, const SolverConfig& cfg, const std::vector<double>& times,
             const std::vector<double>& nu) { return apply_operator(spec, cfg, times, nu); },
          py::arg("spec"), py::arg("config"), py::arg("times"), py::arg("nu"));

    py::class_<ConvergenceRow>(m, "ConvergenceRow")
        .def_readonly("dt", &ConvergenceRow::dt)
        .def_readonly("sup_err", &ConvergenceRow::sup_err)
        .def_readonly("order", &ConvergenceRow::order);
    m.def("convergence_study",
          [](const ProblemSpec& spec, const SolverConfig& base, const std::vector<double>& dts,
             const std::function<double(double)>& nu_ref) {
              return convergence_study(spec, base, dts, nu_ref);
          },
          py::arg("spec"), py::arg("base"), py::arg("dts"),
          py::arg("nu_ref") = std::function<double(double)>{});

    // certification
    py::class_<Certificate>(m, "Certificate")
        .def_readonly("A1", &Certificate::A1)
        .def_readonly("M", &Certificate::M)
        .def_readonly("B1", &Certificate::B1)
        .def_readonly("B2", &Certificate::B2)
        .def_readonly("B3", &Certificate::B3)
        .def_readonly("B4", &Certificate::B4)
        .def_readonly("B5", &Certificate::B5)
        .def_readonly("B6", &Certificate::B6)
        .def_readonly("B7", &Certificate::B7)
        .def_readonly("B8", &Certificate::B8)
        .def_readonly("sigma1", &Certificate::sigma1)
        .def_readonly("sigma2", &Certificate::sigma2)
        .def_readonly("sigma3", &Certificate::sigma3)
        .def_readonly("sigma", &Certificate::sigma)
        .def_readonly("norm_psi0", &Certificate::norm_psi0)
        .def_readonly("norm_dpsi0", &Certificate::norm_dpsi0)
        .def_readonly("flags", &Certificate::flags);
    m.def("default_B2", &default_B2, py::arg("b_bar"));
    m.def("constants", &constants, py::arg("profile"), py::arg("beta2"));
    m.def("bound_set", &bound_set, py::arg("cert"), py::arg("profile"), py::arg("beta1"),
          py::arg("beta2"), py::arg("B2"));
    m.def("window", &window, py::arg("cert"), py::arg("beta2"), py::arg("psi0_at_bbar"));
    m.def("certify_profile", &certify_profile, py::arg("profile"), py::arg("beta1"),
          py::arg("beta2"), py::arg("B2"));
    py::class_<ContractionStats>(m, "ContractionStats")
        .def_readonly("max_ratio", &ContractionStats::max_ratio)
        .def_readonly("mean_ratio", &ContractionStats::mean_ratio)
        .def_readonly("trials_used", &ContractionStats::trials_used)
        .def_readonly("window", &ContractionStats::window)
        .def_readonly("steps", &ContractionStats::steps);
    m.def("empirical_contraction", &empirical_contraction, py::arg("spec"), py::arg("config"),
          py::arg("cert"), py::arg("trials"), py::arg("seed"));
    m.def("spot_check_bounds", &spot_check_bounds, py::arg("spec"), py::arg("config"),
          py::arg("cert"));

    // reference FD
    py::class_<FdConfig>(m, "FdConfig")
        .def(py::init<>())
        .def_readwrite("depth", &FdConfig::depth)
        .def_readwrite("ny", &FdConfig::ny)
        .def_readwrite("dt", &FdConfig::dt)
        .def_readwrite("theta_scheme", &FdConfig::theta_scheme);
    py::class_<FdResult>(m, "FdResult")
        .def_readonly("traj", &FdResult::traj)
        .def_readonly("snapshots", &FdResult::snapshots);
    m.def("fd_solve",
          [](const ProblemSpec& spec, const FdConfig& fd, double t_end,
             const std::vector<double>& snapshot_times) {
              return fd_solve(spec, fd, t_end, snapshot_times);
          },
          py::arg("spec"), py::arg("fd"), py::arg("t_end"),
          py::arg("snapshot_times") = std::vector<double>{});
    py::class_<TrajectoryComparison>(m, "TrajectoryComparison")
        .def_readonly("sup_nu", &TrajectoryComparison::sup_nu)
        .def_readonly("mean_nu", &TrajectoryComparison::mean_nu)
        .def_readonly("sup_zbar", &TrajectoryComparison::sup_zbar)
        .def_readonly("mean_zbar", &TrajectoryComparison::mean_zbar)
        .def_readonly("sup_s", &TrajectoryComparison::sup_s)
        .def_readonly("mean_s", &TrajectoryComparison::mean_s)
        .def_readonly("t_lo", &TrajectoryComparison::t_lo)
        .def_readonly("t_hi", &TrajectoryComparison::t_hi)
        .def_readonly("nodes", &TrajectoryComparison::nodes);
    m.def("compare_trajectories", &compare_trajectories, py::arg("a"), py::arg("b"));

#ifdef STEFAN_VERSION
    m.attr("__version__") = STEFAN_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
