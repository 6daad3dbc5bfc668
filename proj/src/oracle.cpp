#include "dwg/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

namespace dwg::oracle {

namespace {

using boost::math::quadrature::gauss_kronrod;
using kernels::KernelFamily;

// adaptive GK15 on one panel, real integrand
double panel_real(const std::function<double(double)>& f, double a, double b, int depth,
                  double tol, double* err) {
    return gauss_kronrod<double, 15>::integrate(f, a, b, static_cast<unsigned>(depth), tol, err);
}

// decay scale of the spectral envelope (exp(-tau0 x) or exp(-z0 k))
double envelope_scale(const kernels::KernelSpec& spec) {
    return spec.family == KernelFamily::KQuarterProd ? spec.z0 : spec.tau0;
}

double envelope(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                double k) {
    const double x = std::hypot(k, geom.mu);
    const double poly = (k * k + geom.k_perp * geom.k_perp) / x;
    switch (spec.family) {
        case KernelFamily::K1Ratio:
            return poly * k * std::exp(-spec.tau0 * x);
        case KernelFamily::K0Diff:
            return poly * 2.0 * std::exp(-spec.tau0 * x);
        case KernelFamily::IKQuarter:
            return poly * std::sqrt(8.0 / std::max(k, 1e-6)) * std::exp(-spec.tau0 * x);
        case KernelFamily::KQuarterProd:
            return poly * std::sqrt(4.0 * M_PI * k) * std::exp(-k * spec.z0);
    }
    throw std::invalid_argument("envelope: bad family");
}

}  // namespace

void QuadratureSettings::validate() const {
    if (!(rel_tol > 0.0)) throw std::domain_error("QuadratureSettings: rel_tol must be positive");
    if (!(abs_tol > 0.0)) throw std::domain_error("QuadratureSettings: abs_tol must be positive");
    if (max_subdivisions < 1) throw std::domain_error("QuadratureSettings: max_subdivisions must be >= 1");
    if (k_max < 0.0) throw std::domain_error("QuadratureSettings: k_max must be >= 0");
}

double auto_k_max(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                  const QuadratureSettings& settings) {
    if (settings.k_max > 0.0) return settings.k_max;
    double lo = geom.mu, hi = geom.mu + 5.0;
    while (envelope(spec, geom, hi) > settings.abs_tol && hi < 1e7) hi *= 1.6;
    lo = hi / 1.6;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (envelope(spec, geom, mid) > settings.abs_tol ? lo : hi) = mid;
    }
    return hi;
}

QuadResult integrate_spectrum(const std::function<double(double)>& w, double z, double tau,
                              double mu, double k_max, const QuadratureSettings& settings) {
    settings.validate();
    // half-period panels for both sin(kz) and exp(-i tau sqrt(k^2+mu^2))
    const double width = M_PI / (1.0 + std::fabs(z) + std::fabs(tau));
    auto fre = [&](double k) {
        const double x = std::hypot(k, mu);
        return w(k) * std::sin(k * z) * std::cos(tau * x);
    };
    auto fim = [&](double k) {
        const double x = std::hypot(k, mu);
        return -w(k) * std::sin(k * z) * std::sin(tau * x);
    };
    cplx total = 0.0;
    double bound = 0.0;
    const double panel_tol = settings.rel_tol * 0.05;
    for (double a = 0.0; a < k_max;) {
        const double b = std::min(a + width, k_max);
        double er = 0.0, ei = 0.0;
        const double vre = panel_real(fre, a, b, settings.max_subdivisions, panel_tol, &er);
        const double vim = panel_real(fim, a, b, settings.max_subdivisions, panel_tol, &ei);
        total += cplx(vre, vim);
        bound += std::hypot(er, ei);
        a = b;
    }
    const double tolerance = std::max(settings.abs_tol, settings.rel_tol * std::abs(total));
    if (bound > tolerance)
        throw QuadratureError("integrate_spectrum: tolerance not met", total, bound);
    return {total, bound};
}

QuadResult oracle_I(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                    double z, double tau, const QuadratureSettings& settings) {
    spec.validate();
    if (z == 0.0) return {cplx(0.0, 0.0), 0.0};
    if (tau < 0.0) {
        QuadResult r = oracle_I(spec, geom, z, -tau, settings);
        return {std::conj(r.value), r.error_bound};
    }
    const double k_max = auto_k_max(spec, geom, settings);
    auto w = [&](double k) { return kernels::spectral_f(spec, geom, k) / std::hypot(k, geom.mu); };
    QuadResult r = integrate_spectrum(w, z, tau, geom.mu, k_max, settings);
    r.error_bound += envelope(spec, geom, k_max) * 2.0 * envelope_scale(spec);
    return r;
}

QuadResult oracle_F(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                    double z, double tau, const QuadratureSettings& settings) {
    spec.validate();
    if (z == 0.0) return {cplx(0.0, 0.0), 0.0};
    const double k_max = auto_k_max(spec, geom, settings);
    auto w = [&](double k) {
        const double x = std::hypot(k, geom.mu);
        return (k * k + geom.k_perp * geom.k_perp) * kernels::spectral_f(spec, geom, k) / x;
    };
    QuadResult r = integrate_spectrum(w, z, tau, geom.mu, k_max, settings);
    r.value *= spec.A0;
    r.error_bound *= std::abs(spec.A0);
    r.error_bound += std::abs(spec.A0) * envelope(spec, geom, k_max) * 2.0 * envelope_scale(spec);
    return r;
}

QuadResult oracle_G(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                    double z, double tau, const QuadratureSettings& settings) {
    spec.validate();
    if (z == 0.0) return {cplx(0.0, 0.0), 0.0};
    const double k_max = auto_k_max(spec, geom, settings);
    auto w = [&](double k) {
        const double x = std::hypot(k, geom.mu);
        return (k * k + geom.k_perp * geom.k_perp) * kernels::spectral_f(spec, geom, k) /
               (x * (x + 1.0));
    };
    QuadResult r = integrate_spectrum(w, z, tau, geom.mu, k_max, settings);
    r.value *= cplx(0.0, 1.0) * spec.A0;
    r.error_bound *= std::abs(spec.A0);
    r.error_bound += std::abs(spec.A0) * envelope(spec, geom, k_max) * 2.0 * envelope_scale(spec);
    return r;
}

RealQuadResult norm_kspace(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                           const QuadratureSettings& settings) {
    spec.validate();
    settings.validate();
    const double k_max = auto_k_max(spec, geom, settings);
    auto f = [&](double k) {
        const double x = std::hypot(k, geom.mu);
        return x / (x + 1.0) * std::norm(kernels::spectral_A(spec, geom, k));
    };
    double total = 0.0, bound = 0.0;
    const double width = std::max(0.5, k_max / 64.0);
    for (double a = 0.0; a < k_max;) {
        const double b = std::min(a + width, k_max);
        double err = 0.0;
        total += panel_real(f, a, b, settings.max_subdivisions, settings.rel_tol * 0.05, &err);
        bound += err;
        a = b;
    }
    const double tolerance = std::max(settings.abs_tol, settings.rel_tol * std::fabs(total));
    if (bound > tolerance) throw QuadratureError("norm_kspace: tolerance not met", total, bound);
    return {total, bound};
}

RealQuadResult norm_zspace(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                           const QuadratureSettings& settings) {
    spec.validate();
    settings.validate();
    auto f = [&](double z) {
        const auto b = kernels::kernel_bundle(spec, geom, z, 0.0);
        return std::norm(b.F) + geom.k_perp * geom.k_perp * std::norm(b.G) + std::norm(b.G_z);
    };
    // exponential tail: probe outward until the integrand is negligible
    const double peak = f(std::max(spec.z0, 0.5 * spec.tau0) + 0.5 / geom.mu) + f(1.0 / geom.mu);
    double z_end = spec.z0 + spec.tau0 + 5.0 / geom.mu;
    while (f(z_end) > 1e-18 * peak && z_end < 1e5) z_end *= 1.4;

    double total = 0.0, bound = 0.0;
    const double width = std::min(0.5, 1.0 / geom.mu);
    for (double a = 0.0; a < z_end;) {
        const double b = std::min(a + width, z_end);
        double err = 0.0;
        total += panel_real(f, a, b, settings.max_subdivisions, settings.rel_tol * 0.05, &err);
        bound += err;
        a = b;
    }
    const double tolerance = std::max(settings.abs_tol, settings.rel_tol * std::fabs(total));
    if (bound > tolerance) throw QuadratureError("norm_zspace: tolerance not met", total, bound);
    return {total, bound};
}

}  // namespace dwg::oracle
