#include "dwg/backflow.hpp"

#include <cmath>

#include "dwg/specfun.hpp"

namespace dwg::backflow {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAsymptoticSafeL = 50.0;

}  // namespace

void DetectorPlane::validate() const {
    if (!(L > 0.0)) throw std::domain_error("DetectorPlane: L must be positive");
    if (!(t > L)) throw std::domain_error("DetectorPlane: pre-light-cone detector time (require t > L)");
}

double k_parallel(const kernels::WaveguideGeometry& geom, double L, double t) {
    if (!(t > L) || !(L > 0.0))
        throw std::domain_error("k_parallel: pre-light-cone detector time (require t > L > 0)");
    return geom.mu * L / std::sqrt(t * t - L * L);
}

double asymptotic_jz(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                     const wavepacket::SpinState& spin, double rho, double phi,
                     const DetectorPlane& plane) {
    const double kpar = k_parallel(geom, plane.L, plane.t);
    const double j0 = specfun::bessel_j(0, geom.k_perp * rho);
    const double j1 = specfun::bessel_j(1, geom.k_perp * rho);
    const double prefactor = kPi * plane.t * plane.t * std::pow(kpar, 3) /
                             (geom.mu * geom.mu * std::pow(plane.L, 3));
    const double pa = j0 * std::norm(kernels::spectral_A(spec, geom, kpar)) /
                      (std::hypot(kpar, geom.mu) + 1.0);
    const double bracket = kpar * j0 - geom.k_perp * std::sin(spin.theta) *
                                           std::sin(spin.phi_spin - phi) * j1;
    return prefactor * pa * bracket;
}

bool backflow_sufficient(const kernels::WaveguideGeometry& geom, const wavepacket::SpinState& spin,
                         double rho, double phi, const DetectorPlane& plane) {
    const double s = std::sin(spin.theta);
    if (s <= 0.0) return false;  // polarization along the axis never qualifies
    const double kpar = k_parallel(geom, plane.L, plane.t);
    return rho * std::sin(spin.phi_spin - phi) >
           2.0 * kpar / (geom.k_perp * geom.k_perp * s);
}

BackflowReport backflow_map(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                            const wavepacket::SpinState& spin, const DetectorPlane& plane,
                            int n_rho, int n_phi, MapMode mode, bool parallel) {
    plane.validate();
    spec.validate();
    if (n_rho < 1 || n_phi < 1) throw std::domain_error("backflow_map: grid must be at least 1x1");

    BackflowReport rep;
    rep.n_rho = n_rho;
    rep.n_phi = n_phi;
    rep.jz.assign(static_cast<size_t>(n_rho) * n_phi, 0.0);
    if (mode == MapMode::Asymptotic && plane.L < kAsymptoticSafeL)
        rep.warnings.push_back("asymptotic mode below L = 50 Compton lengths; stationary-phase error grows as 1/L");

    const double drho = geom.a / n_rho;
    const double dphi = 2.0 * kPi / n_phi;
    const int cells = n_rho * n_phi;

    // deterministic per-cell fill; reduction below stays serial
#pragma omp parallel for schedule(static) if (parallel)
    for (int idx = 0; idx < cells; ++idx) {
        const int i = idx / n_phi, j = idx % n_phi;
        const double rho = (i + 0.5) * drho;
        const double phi = (j + 0.5) * dphi;
        double v;
        if (mode == MapMode::Asymptotic) {
            v = asymptotic_jz(spec, geom, spin, rho, phi, plane);
        } else {
            wavepacket::CylPoint p;
            p.rho = rho;
            p.phi = phi;
            p.z = plane.L;
            v = wavepacket::current_z_closed(spec, geom, spin, p, plane.t);
        }
        rep.jz[idx] = v;
    }

    rep.mask.assign(rep.jz.size(), 0);
    double neg_area = 0.0, area = 0.0;
    rep.min_jz = rep.jz[0];
    for (int idx = 0; idx < cells; ++idx) {
        const int i = idx / n_phi;
        const double rho = (i + 0.5) * drho;
        const double w = rho * drho * dphi;
        const double v = rep.jz[idx];
        area += w;
        rep.total_flux += v * w;
        rep.min_jz = std::min(rep.min_jz, v);
        if (v < 0.0) {
            rep.mask[idx] = 1;
            neg_area += w;
            rep.backflow_flux += v * w;
        }
    }
    rep.area_fraction = neg_area / area;
    return rep;
}

std::vector<BackflowReport> persistence_scan(const kernels::KernelSpec& spec,
                                             const kernels::WaveguideGeometry& geom,
                                             const wavepacket::SpinState& spin, double L,
                                             const std::vector<double>& t_list, MapMode mode,
                                             int n_rho, int n_phi) {
    std::vector<BackflowReport> out;
    out.reserve(t_list.size());
    for (const double t : t_list) {
        DetectorPlane plane;
        plane.L = L;
        plane.t = t;
        out.push_back(backflow_map(spec, geom, spin, plane, n_rho, n_phi, mode));
    }
    return out;
}

}  // namespace dwg::backflow
