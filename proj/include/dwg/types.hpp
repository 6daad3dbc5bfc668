#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dwg {

using cplx = std::complex<double>;

inline bool is_finite(const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

/// Thrown when adaptive quadrature cannot meet its tolerances. Carries the
/// best available estimate together with the error bound actually achieved.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, cplx best, double bound)
        : std::runtime_error(what), best_estimate(best), error_bound(bound) {}

    cplx best_estimate;
    double error_bound;
};

}  // namespace dwg
