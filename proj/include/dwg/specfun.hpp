#pragma once

// Special functions needed by the waveguide kernels: J0/J1 on the real line,
// the first zero of J0, and modified Bessel functions K_nu, I_nu of orders
// {-1/4, 0, 1/4, 1} for complex arguments on the principal branch
// (arg z in (-pi, pi]). Complex evaluation uses the ascending series below
// |z| = switch_radius() and the large-argument expansion above it; for K in
// the right-half-plane pocket where the series cancels badly, Steed's
// continued fraction takes over. All internal sums run in extended
// precision so every seam stays below 1e-10 relative error.

#include "dwg/types.hpp"

namespace dwg::specfun {

enum class BesselOrder { MinusQuarter, Zero, Quarter, One };

double order_value(BesselOrder nu);

/// J0 or J1 (order must be 0 or 1), x >= 0.
double bessel_j(int order, double x);

/// First positive zero of J0, accurate to machine precision.
double first_j0_zero();

/// Modified Bessel function of the second kind, principal branch.
/// Domain error for z = 0 or z on the closed negative real axis.
cplx bessel_k(BesselOrder nu, cplx z);

/// Modified Bessel function of the first kind, principal branch.
/// Domain error on the closed negative real axis for non-integer order
/// (including z = 0 for negative order, where the function diverges).
cplx bessel_i(BesselOrder nu, cplx z);

namespace detail {

// Generic real order. Same branch conventions as the public entry points,
// no order restriction; used internally for recurrences and by tests.
cplx modified_bessel_k(double nu, cplx z);
cplx modified_bessel_i(double nu, cplx z);

// sum_m (z/2)^{2m} / (m! Gamma(m+nu+1)); equals I_nu(z) * (z/2)^{-nu}.
// Converges everywhere, accurate for |z| <= switch_radius().
cplx bessel_i_scaled_series_sum(double nu, cplx z);

// Evaluation-path probes for seam cross-checks.
cplx bessel_k_series_path(double nu, cplx z);
cplx bessel_k_asymptotic_path(double nu, cplx z);
cplx bessel_k_cf_path(double nu, cplx z);
cplx bessel_i_series_path(double nu, cplx z);
cplx bessel_i_asymptotic_path(double nu, cplx z);

double switch_radius();

}  // namespace detail

}  // namespace dwg::specfun
