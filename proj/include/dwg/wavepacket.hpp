#pragma once

// Assembly of the full four-component wave packet inside the guide, its
// probability density and current, the closed-form axial current with its
// convective/spin split, normalization, and finite-difference residual
// checks of the evolution equation. Standard representation, beta diagonal;
// upper pair are the large components.

#include <functional>

#include "dwg/kernels.hpp"
#include "dwg/oracle.hpp"
#include "dwg/types.hpp"

namespace dwg::wavepacket {

struct SpinState {
    double theta = 0.0;     // polar Bloch angle in [0, pi]
    double phi_spin = 0.0;  // azimuthal Bloch angle in [0, 2 pi)

    void validate() const;
    /// two-spinor (cos(theta/2), e^{i phi_spin} sin(theta/2))
    std::pair<cplx, cplx> chi() const;
};

struct CylPoint {
    double rho = 0.0;
    double phi = 0.0;
    double z = 0.0;
};

struct Bispinor {
    cplx c1, c2;  // large components
    cplx c3, c4;  // small components

    double density() const;
};

struct CurrentSample {
    double density = 0.0;
    double j_rho = 0.0;
    double j_phi = 0.0;
    double j_z = 0.0;
};

struct CurrentSplit {
    double convective = 0.0;
    double spin_term = 0.0;
};

Bispinor evaluate_bispinor(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                           const SpinState& spin, const CylPoint& p, double t);

/// density and cylindrical current components by direct matrix contraction
CurrentSample density_and_current(const Bispinor& psi, double phi);

/// axial current from the closed two-term expression
double current_z_closed(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                        const SpinState& spin, const CylPoint& p, double t);

/// the two terms of current_z_closed reported separately
CurrentSplit current_z_split(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                             const SpinState& spin, const CylPoint& p, double t);

/// positive real normalization constant making the packet unit-norm
cplx normalize(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
               const oracle::QuadratureSettings& settings = {});

/// guide-volume integral of the density at time t (radial part analytic)
double total_norm(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                  const SpinState& spin, double t,
                  const oracle::QuadratureSettings& settings = {});

/// scaled norm of the evolution-equation residual, central differences at step h
double dirac_residual(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                      const SpinState& spin, const CylPoint& p, double t, double h);

namespace detail {

using PsiFn = std::function<Bispinor(double x, double y, double z, double t)>;

/// residual harness reusable for any candidate solution (e.g. single modes)
double dirac_residual_cartesian(const PsiFn& psi, double x, double y, double z, double t, double h);

}  // namespace detail

}  // namespace dwg::wavepacket
