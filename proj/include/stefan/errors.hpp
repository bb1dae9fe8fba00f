#ifndef STEFAN_ERRORS_HPP
#define STEFAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stefan {

// Argument outside the mathematical domain of an operation (t <= 0, sign
// violations, evaluation beyond the free boundary).
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// Caller broke a structural precondition (mismatched grids, target time not
// on the grid, disjoint trajectories).
class usage_error : public std::invalid_argument {
public:
    explicit usage_error(const std::string& what) : std::invalid_argument(what) {}
};

// 1/theta0 integral hit a zero or sign change of theta0 on the path.
class singular_transform_error : public std::runtime_error {
public:
    singular_transform_error(const std::string& what, double lo, double hi)
        : std::runtime_error(what), interval_lo(lo), interval_hi(hi) {}
    double interval_lo;
    double interval_hi;
};

// |1 + 1/(2 beta2)| too small for the flux equation prefactor.
class degenerate_prefactor_error : public std::runtime_error {
public:
    explicit degenerate_prefactor_error(const std::string& what) : std::runtime_error(what) {}
};

// beta2 outside the regime the contraction constants are defined for.
class out_of_regime_error : public std::runtime_error {
public:
    explicit out_of_regime_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad or inconsistent run configuration (CLI exit code 2).
class config_error : public std::runtime_error {
public:
    config_error(const std::string& what, int line = 0) : std::runtime_error(what), line_number(line) {}
    int line_number;
};

} // namespace stefan

#endif
