#pragma once

// Closed-form evaluation of the longitudinal master integral
//   I(z,tau) = int_0^inf dk f(k) sin(kz) exp(-i tau sqrt(k^2+mu^2)) / sqrt(k^2+mu^2)
// for the four spectral families f(k) that admit modified-Bessel closed
// forms, together with the derivative fields and the amplitudes
//   F = A0 (k_perp^2 I - I_zz),  G = A0 (-i I - I_tau),  G_z = A0 (-i I_z - I_ztau).
// Code units: Compton length and c both 1.

#include "dwg/types.hpp"

namespace dwg::kernels {

struct WaveguideGeometry {
    double a = 1.0;       // guide radius
    double k_perp = 1.0;  // first radial wavenumber, j01/a
    double mu = 1.0;      // effective longitudinal mass, sqrt(k_perp^2 + 1)

    static WaveguideGeometry with_radius(double a);
    static WaveguideGeometry with_mu(double mu);
    void validate() const;
};

enum class KernelFamily {
    K1Ratio = 1,       // f = k exp(-tau0 x);       I = mu z K1(mu R)/R
    K0Diff = 2,        // f = 2 sin(k z0) e^{-tau0 x};  I = K0(..) - K0(..)
    IKQuarter = 3,     // f = sqrt(8/k) sin(k z0) e^{-tau0 x};  quarter-order I*K
    KQuarterProd = 4,  // f = sqrt(4 pi) sqrt(k) e^{-k z0};     -d/dz of K*K products
};

struct KernelSpec {
    KernelFamily family = KernelFamily::K1Ratio;
    double tau0 = 1.0;  // initial packet width parameter (families 1-3)
    double z0 = 0.0;    // offset/width parameter (families 2-4)
    cplx A0 = {1.0, 0.0};

    void validate() const;
};

struct AmplitudeBundle {
    cplx I, I_z, I_zz, I_tau, I_ztau;
    cplx F, G, G_z;
};

/// Spectral profile f(k) of the chosen family.
double spectral_f(const KernelSpec& spec, const WaveguideGeometry& geom, double k);

/// Full spectral amplitude A(k) = A0 (k^2 + k_perp^2) f(k) / sqrt(k^2 + mu^2).
cplx spectral_A(const KernelSpec& spec, const WaveguideGeometry& geom, double k);

/// Closed-form I(z, tau). Odd in z; I(z, -tau) = conj I(z, tau).
cplx kernel_I(const KernelSpec& spec, const WaveguideGeometry& geom, double z, double tau);

/// I and its derivative fields plus the F/G amplitudes at one point.
AmplitudeBundle kernel_bundle(const KernelSpec& spec, const WaveguideGeometry& geom,
                              double z, double tau);

}  // namespace dwg::kernels
