#pragma once

// Ground-truth adaptive quadrature for the defining k-integrals behind the
// closed-form kernels: I, F, G and both normalization integrals. Oscillation
// is tamed by pre-splitting [0, k_max] into panels no wider than a half
// period of either oscillatory factor; each panel then goes through
// adaptive Gauss-Kronrod. Results carry an explicit error bound, and
// failure to meet the tolerances raises QuadratureError with the best
// estimate achieved.

#include <functional>

#include "dwg/kernels.hpp"
#include "dwg/types.hpp"

namespace dwg::oracle {

struct QuadratureSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    // maximum Gauss-Kronrod bisection depth per panel
    int max_subdivisions = 12;
    // spectral cutoff; 0 selects the smallest k whose envelope drops
    // below abs_tol
    double k_max = 0.0;

    void validate() const;
};

struct QuadResult {
    cplx value;
    double error_bound;
};

struct RealQuadResult {
    double value;
    double error_bound;
};

/// Envelope-based automatic spectral cutoff for the given family.
double auto_k_max(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                  const QuadratureSettings& settings);

/// Integral of w(k) sin(kz) exp(-i tau sqrt(k^2+mu^2)) over [0, k_max].
/// Exposed so property tests can drive the engine with custom weights.
QuadResult integrate_spectrum(const std::function<double(double)>& w, double z, double tau,
                              double mu, double k_max, const QuadratureSettings& settings);

QuadResult oracle_I(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                    double z, double tau, const QuadratureSettings& settings = {});

QuadResult oracle_F(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                    double z, double tau, const QuadratureSettings& settings = {});

QuadResult oracle_G(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                    double z, double tau, const QuadratureSettings& settings = {});

/// k-space normalization integral: int_0^inf x/(x+1) |A(k)|^2 dk, x = sqrt(k^2+mu^2).
RealQuadResult norm_kspace(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                           const QuadratureSettings& settings = {});

/// z-space normalization integral of |F|^2 + k_perp^2 |G|^2 + |G_z|^2 at tau = 0,
/// built from the closed-form amplitudes. Equals pi times norm_kspace.
RealQuadResult norm_zspace(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                           const QuadratureSettings& settings = {});

}  // namespace dwg::oracle
