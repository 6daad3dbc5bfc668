#include "dwg/wavepacket.hpp"

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "dwg/specfun.hpp"

namespace dwg::wavepacket {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

void SpinState::validate() const {
    if (!(theta >= 0.0 && theta <= kPi)) throw std::domain_error("SpinState: theta must lie in [0, pi]");
    if (!(phi_spin >= 0.0 && phi_spin < 2.0 * kPi))
        throw std::domain_error("SpinState: phi_spin must lie in [0, 2 pi)");
}

std::pair<cplx, cplx> SpinState::chi() const {
    return {cplx(std::cos(0.5 * theta), 0.0),
            std::polar(std::sin(0.5 * theta), phi_spin)};
}

double Bispinor::density() const {
    return std::norm(c1) + std::norm(c2) + std::norm(c3) + std::norm(c4);
}

Bispinor evaluate_bispinor(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                           const SpinState& spin, const CylPoint& p, double t) {
    if (p.rho < 0.0 || p.rho > geom.a * (1.0 + 1e-12))
        throw std::domain_error("evaluate_bispinor: point outside the guide radius");
    const auto [x1, x2] = spin.chi();
    const auto b = kernels::kernel_bundle(spec, geom, p.z, t);
    const double j0 = specfun::bessel_j(0, geom.k_perp * p.rho);
    const double j1 = specfun::bessel_j(1, geom.k_perp * p.rho);
    const cplx radial_g = geom.k_perp * j1 * b.G;
    Bispinor psi;
    psi.c1 = j0 * b.F * x1;
    psi.c2 = j0 * b.F * x2;
    // lower pair: -(sigma_z d/dz + sigma_rho d/drho) applied to J0 G chi,
    // with d/drho J0(k rho) = -k J1(k rho) and sigma_rho off-diagonal e^{-+ i phi}
    psi.c3 = -j0 * b.G_z * x1 + radial_g * std::polar(1.0, -p.phi) * x2;
    psi.c4 = j0 * b.G_z * x2 + radial_g * std::polar(1.0, p.phi) * x1;
    return psi;
}

CurrentSample density_and_current(const Bispinor& psi, double phi) {
    CurrentSample s;
    s.density = psi.density();
    const double jx = 2.0 * std::real(std::conj(psi.c1) * psi.c4 + std::conj(psi.c2) * psi.c3);
    const double jy = 2.0 * std::imag(std::conj(psi.c1) * psi.c4 - std::conj(psi.c2) * psi.c3);
    s.j_z = 2.0 * std::real(std::conj(psi.c1) * psi.c3 - std::conj(psi.c2) * psi.c4);
    s.j_rho = jx * std::cos(phi) + jy * std::sin(phi);
    s.j_phi = -jx * std::sin(phi) + jy * std::cos(phi);
    return s;
}

CurrentSplit current_z_split(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                             const SpinState& spin, const CylPoint& p, double t) {
    const auto b = kernels::kernel_bundle(spec, geom, p.z, t);
    const double j0 = specfun::bessel_j(0, geom.k_perp * p.rho);
    const double j1 = specfun::bessel_j(1, geom.k_perp * p.rho);
    CurrentSplit out;
    out.convective = -2.0 * j0 * j0 * std::real(std::conj(b.F) * b.G_z);
    out.spin_term = -2.0 * geom.k_perp * std::sin(spin.phi_spin - p.phi) * std::sin(spin.theta) *
                    j0 * j1 * std::imag(std::conj(b.F) * b.G);
    return out;
}

double current_z_closed(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                        const SpinState& spin, const CylPoint& p, double t) {
    const auto s = current_z_split(spec, geom, spin, p, t);
    return s.convective + s.spin_term;
}

cplx normalize(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
               const oracle::QuadratureSettings& settings) {
    kernels::KernelSpec unit = spec;
    unit.A0 = {1.0, 0.0};
    const double raw = oracle::norm_kspace(unit, geom, settings).value;
    const double j1 = specfun::bessel_j(1, specfun::first_j0_zero());
    const double target = 1.0 / (kPi * kPi * geom.a * geom.a * j1 * j1);
    return {std::sqrt(target / raw), 0.0};
}

double total_norm(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                  const SpinState& spin, double t, const oracle::QuadratureSettings& settings) {
    (void)spin;  // the angular integral removes every spin dependence
    using boost::math::quadrature::gauss_kronrod;
    auto f = [&](double z) {
        const auto b = kernels::kernel_bundle(spec, geom, z, t);
        return std::norm(b.F) + geom.k_perp * geom.k_perp * std::norm(b.G) + std::norm(b.G_z);
    };
    const double probe = f(std::max({1.0, t, spec.z0}));
    double z_end = t + spec.z0 + spec.tau0 + 5.0 / geom.mu + 1.0;
    while (f(z_end) > std::max(probe, 1.0) * 1e-18 && z_end < 1e5) z_end *= 1.3;

    double total = 0.0, bound = 0.0;
    const double width = std::min(0.5, 1.0 / geom.mu);
    for (double a = 0.0; a < z_end;) {
        const double b = std::min(a + width, z_end);
        double err = 0.0;
        total += gauss_kronrod<double, 15>::integrate(f, a, b,
                                                      static_cast<unsigned>(settings.max_subdivisions),
                                                      settings.rel_tol * 0.05, &err);
        bound += err;
        a = b;
    }
    if (bound > std::max(settings.abs_tol, settings.rel_tol * total * 10.0))
        throw QuadratureError("total_norm: tolerance not met", total, bound);

    const double j1 = specfun::bessel_j(1, specfun::first_j0_zero());
    return kPi * geom.a * geom.a * j1 * j1 * total;
}

namespace detail {

namespace {

std::array<cplx, 4> to_array(const Bispinor& p) { return {p.c1, p.c2, p.c3, p.c4}; }

std::array<cplx, 4> alpha_x(const std::array<cplx, 4>& v) { return {v[3], v[2], v[1], v[0]}; }

std::array<cplx, 4> alpha_y(const std::array<cplx, 4>& v) {
    const cplx i(0.0, 1.0);
    return {-i * v[3], i * v[2], -i * v[1], i * v[0]};
}

std::array<cplx, 4> alpha_z(const std::array<cplx, 4>& v) { return {v[2], -v[3], v[0], -v[1]}; }

std::array<cplx, 4> central_diff(const PsiFn& psi, double x, double y, double z, double t,
                                 int axis, double h) {
    const double dx = axis == 0 ? h : 0.0, dy = axis == 1 ? h : 0.0;
    const double dz = axis == 2 ? h : 0.0, dt = axis == 3 ? h : 0.0;
    const auto plus = to_array(psi(x + dx, y + dy, z + dz, t + dt));
    const auto minus = to_array(psi(x - dx, y - dy, z - dz, t - dt));
    std::array<cplx, 4> d;
    for (int i = 0; i < 4; ++i) d[i] = (plus[i] - minus[i]) / (2.0 * h);
    return d;
}

}  // namespace

double dirac_residual_cartesian(const PsiFn& psi, double x, double y, double z, double t,
                                double h) {
    const auto v = to_array(psi(x, y, z, t));
    const auto dt = central_diff(psi, x, y, z, t, 3, h);
    const auto gx = alpha_x(central_diff(psi, x, y, z, t, 0, h));
    const auto gy = alpha_y(central_diff(psi, x, y, z, t, 1, h));
    const auto gz = alpha_z(central_diff(psi, x, y, z, t, 2, h));
    const std::array<cplx, 4> beta = {v[0], v[1], -v[2], -v[3]};
    const cplx iu(0.0, 1.0);
    double res2 = 0.0, scale2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        const cplx r = iu * (dt[i] + gx[i] + gy[i] + gz[i]) - beta[i];
        res2 += std::norm(r);
        scale2 += std::norm(v[i]);
    }
    return std::sqrt(res2) / std::max(std::sqrt(scale2), 1e-300);
}

}  // namespace detail

double dirac_residual(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                      const SpinState& spin, const CylPoint& p, double t, double h) {
    auto psi = [&](double x, double y, double z, double tt) {
        CylPoint q;
        q.rho = std::hypot(x, y);
        q.phi = std::atan2(y, x);
        q.z = z;
        return evaluate_bispinor(spec, geom, spin, q, tt);
    };
    const double x = p.rho * std::cos(p.phi), y = p.rho * std::sin(p.phi);
    return detail::dirac_residual_cartesian(psi, x, y, p.z, t, h);
}

}  // namespace dwg::wavepacket
