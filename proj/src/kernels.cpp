#include "dwg/kernels.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "dwg/specfun.hpp"

namespace dwg::kernels {

namespace {

using specfun::detail::modified_bessel_i;
using specfun::detail::modified_bessel_k;

constexpr double kPi = std::numbers::pi;

// K_0 .. K_3 at the same argument via upward recurrence.
std::array<cplx, 4> k_ladder(cplx x) {
    std::array<cplx, 4> k;
    k[0] = modified_bessel_k(0.0, x);
    k[1] = modified_bessel_k(1.0, x);
    k[2] = k[0] + 2.0 / x * k[1];
    k[3] = k[1] + 4.0 / x * k[2];
    return k;
}

// families 1-2: analytic derivative chains through
// g_nu(w) = w^{-nu/2} K_nu(mu sqrt(w)),  g_nu' = -(mu/2) g_{nu+1}
struct GLadder {
    cplx g0, g1, g2, g3;
};

GLadder g_ladder(cplx w, double mu) {
    const cplx r = std::sqrt(w);
    const auto k = k_ladder(mu * r);
    GLadder g;
    g.g0 = k[0];
    g.g1 = k[1] / r;
    g.g2 = k[2] / w;
    g.g3 = k[3] / (w * r);
    return g;
}

AmplitudeBundle bundle_family1(const KernelSpec& spec, const WaveguideGeometry& geom,
                               double z, double tau) {
    const double mu = geom.mu;
    const cplx S(spec.tau0, tau);
    const cplx w = z * z + S * S;
    const auto g = g_ladder(w, mu);
    AmplitudeBundle b;
    b.I = mu * z * g.g1;
    b.I_z = mu * g.g1 - mu * mu * z * z * g.g2;
    b.I_zz = -3.0 * mu * mu * z * g.g2 + std::pow(mu, 3) * z * z * z * g.g3;
    b.I_tau = cplx(0, -1) * mu * mu * z * S * g.g2;
    b.I_ztau = cplx(0, -1) * mu * mu * S * (g.g2 - mu * z * z * g.g3);
    return b;
}

AmplitudeBundle bundle_family2(const KernelSpec& spec, const WaveguideGeometry& geom,
                               double z, double tau) {
    const double mu = geom.mu;
    const cplx S(spec.tau0, tau);
    const double dm = spec.z0 - z, dp = spec.z0 + z;
    const cplx wm = dm * dm + S * S, wp = dp * dp + S * S;
    const auto gm = g_ladder(wm, mu), gp = g_ladder(wp, mu);
    AmplitudeBundle b;
    b.I = gm.g0 - gp.g0;
    b.I_z = mu * (dm * gm.g1 + dp * gp.g1);
    b.I_zz = mu * (-gm.g1 + mu * dm * dm * gm.g2) + mu * (gp.g1 - mu * dp * dp * gp.g2);
    b.I_tau = cplx(0, -1) * mu * S * (gm.g1 - gp.g1);
    b.I_ztau = cplx(0, -1) * mu * mu * S * (dm * gm.g2 + dp * gp.g2);
    return b;
}

// family 3: I = C(z0 - z) - C(z0 + z), C even.  The quarter-order I-factor
// is folded into the prefactor so C stays finite and smooth through b = 0.
cplx c_term_family3(double b, cplx S, double mu) {
    const double babs = std::fabs(b);
    const cplx R = std::sqrt(S * S + babs * babs);
    const cplx den = R + S;
    const cplx xp = 0.5 * mu * den;
    const cplx xm = 0.5 * mu * babs * babs / den;
    const cplx kq = modified_bessel_k(0.25, xp);
    if (std::abs(xm) < specfun::detail::switch_radius()) {
        const cplx sum = specfun::detail::bessel_i_scaled_series_sum(-0.25, xm);
        return std::sqrt(kPi) * std::pow(4.0 * den / mu, 0.25) * kq * sum;
    }
    return std::sqrt(kPi * babs) * modified_bessel_i(-0.25, xm) * kq;
}

cplx kernel_I_family3(const KernelSpec& spec, const WaveguideGeometry& geom,
                      double z, double tau) {
    const cplx S(spec.tau0, tau);
    return c_term_family3(spec.z0 - z, S, geom.mu) - c_term_family3(spec.z0 + z, S, geom.mu);
}

// family 4 bracket term at real offset zeta.  i*xi_minus starts in the lower
// half-plane at tau = 0; for zeta < 0 its path crosses the negative real
// axis once Re(xi_minus) turns positive, and K_{1/4} must be continued onto
// the adjacent sheet:  K -> e^{i pi/2} K + sqrt(2) pi i I.
cplx bracket_term_family4(double zeta, double tau, double mu, double z0) {
    const cplx q(z0, zeta);
    const cplx D = mu * std::sqrt(tau * tau + q * q);
    const cplx xp = 0.5 * (mu * tau + D);
    const cplx xm = 0.5 * (mu * tau - D);
    const cplx iu(0.0, 1.0);
    const cplx kp = modified_bessel_k(0.25, iu * xp);
    cplx km;
    if (zeta < 0.0 && xm.real() > 0.0) {
        const cplx w = iu * xm;
        km = iu * modified_bessel_k(0.25, w) +
             std::sqrt(2.0) * kPi * iu * modified_bessel_i(0.25, w);
    } else {
        km = modified_bessel_k(0.25, iu * xm);
    }
    return std::sqrt(q) * kp * km;
}

cplx bracket_family4(const KernelSpec& spec, const WaveguideGeometry& geom,
                     double z, double tau) {
    return bracket_term_family4(z, tau, geom.mu, spec.z0) +
           bracket_term_family4(-z, tau, geom.mu, spec.z0);
}

double stencil_step(double mu) { return 0.02 * std::min(1.0, 1.5 / mu); }

// seven-point central first/second derivatives, O(h^6)
template <typename F>
cplx d1_7(const F& f, double x, double h) {
    return (45.0 * (f(x + h) - f(x - h)) - 9.0 * (f(x + 2 * h) - f(x - 2 * h)) +
            (f(x + 3 * h) - f(x - 3 * h))) /
           (60.0 * h);
}

cplx d1_7_row(const std::array<cplx, 7>& v, double h) {
    return (45.0 * (v[4] - v[2]) - 9.0 * (v[5] - v[1]) + (v[6] - v[0])) / (60.0 * h);
}

cplx d2_7_row(const std::array<cplx, 7>& v, double h) {
    return (2.0 * (v[6] + v[0]) - 27.0 * (v[5] + v[1]) + 270.0 * (v[4] + v[2]) - 490.0 * v[3]) /
           (180.0 * h * h);
}

cplx d1_5_row(const std::array<cplx, 5>& v, double h) {
    return (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
}

// families 3-4: derivative fields from high-order stencils of kernel_I
AmplitudeBundle bundle_by_stencil(const KernelSpec& spec, const WaveguideGeometry& geom,
                                  double z, double tau) {
    const double h = stencil_step(geom.mu);
    std::array<std::array<cplx, 7>, 5> grid;  // [tau offset][z offset]
    for (int j = -2; j <= 2; ++j)
        for (int i = -3; i <= 3; ++i)
            grid[j + 2][i + 3] = kernel_I(spec, geom, z + i * h, tau + j * h);

    AmplitudeBundle b;
    b.I = grid[2][3];
    b.I_z = d1_7_row(grid[2], h);
    b.I_zz = d2_7_row(grid[2], h);
    std::array<cplx, 5> col, colz;
    for (int j = 0; j < 5; ++j) {
        col[j] = grid[j][3];
        colz[j] = d1_7_row(grid[j], h);
    }
    b.I_tau = d1_5_row(col, h);
    b.I_ztau = d1_5_row(colz, h);
    return b;
}

void attach_amplitudes(AmplitudeBundle& b, const KernelSpec& spec, const WaveguideGeometry& geom) {
    const cplx iu(0.0, 1.0);
    b.F = spec.A0 * (geom.k_perp * geom.k_perp * b.I - b.I_zz);
    b.G = spec.A0 * (-iu * b.I - b.I_tau);
    b.G_z = spec.A0 * (-iu * b.I_z - b.I_ztau);
}

}  // namespace

WaveguideGeometry WaveguideGeometry::with_radius(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::domain_error("WaveguideGeometry: radius must be positive");
    WaveguideGeometry g;
    g.a = a;
    g.k_perp = specfun::first_j0_zero() / a;
    g.mu = std::hypot(g.k_perp, 1.0);
    return g;
}

WaveguideGeometry WaveguideGeometry::with_mu(double mu) {
    if (!(mu > 1.0)) throw std::domain_error("WaveguideGeometry: mu must exceed 1");
    return with_radius(specfun::first_j0_zero() / std::sqrt(mu * mu - 1.0));
}

void WaveguideGeometry::validate() const {
    if (!(a > 0.0)) throw std::domain_error("WaveguideGeometry: radius must be positive");
    if (std::fabs(k_perp * a - specfun::first_j0_zero()) > 1e-12)
        throw std::domain_error("WaveguideGeometry: k_perp * a must equal the first J0 zero");
    if (std::fabs(mu * mu - k_perp * k_perp - 1.0) > 1e-12)
        throw std::domain_error("WaveguideGeometry: mu^2 - k_perp^2 must equal 1");
}

void KernelSpec::validate() const {
    if (!(tau0 > 0.0) || !std::isfinite(tau0))
        throw std::domain_error("KernelSpec: tau0 must be positive");
    if (family == KernelFamily::KQuarterProd) {
        if (!(z0 > 0.0)) throw std::domain_error("KernelSpec: z0 must be positive for family 4");
    } else if (family != KernelFamily::K1Ratio) {
        if (!(z0 >= 0.0)) throw std::domain_error("KernelSpec: z0 must be non-negative");
    }
    if (!is_finite(A0)) throw std::domain_error("KernelSpec: A0 must be finite");
}

double spectral_f(const KernelSpec& spec, const WaveguideGeometry& geom, double k) {
    if (k < 0.0 || !std::isfinite(k)) throw std::domain_error("spectral_f: k must be finite and >= 0");
    const double x = std::hypot(k, geom.mu);
    switch (spec.family) {
        case KernelFamily::K1Ratio:
            return k * std::exp(-spec.tau0 * x);
        case KernelFamily::K0Diff:
            return 2.0 * std::sin(k * spec.z0) * std::exp(-spec.tau0 * x);
        case KernelFamily::IKQuarter:
            return k == 0.0 ? 0.0 : std::sqrt(8.0 / k) * std::sin(k * spec.z0) * std::exp(-spec.tau0 * x);
        case KernelFamily::KQuarterProd:
            return std::sqrt(4.0 * kPi) * std::sqrt(k) * std::exp(-k * spec.z0);
    }
    throw std::invalid_argument("spectral_f: bad family");
}

cplx spectral_A(const KernelSpec& spec, const WaveguideGeometry& geom, double k) {
    const double x = std::hypot(k, geom.mu);
    return spec.A0 * (k * k + geom.k_perp * geom.k_perp) * spectral_f(spec, geom, k) / x;
}

cplx kernel_I(const KernelSpec& spec, const WaveguideGeometry& geom, double z, double tau) {
    if (!std::isfinite(z) || !std::isfinite(tau))
        throw std::domain_error("kernel_I: z and tau must be finite");
    if (tau < 0.0) return std::conj(kernel_I(spec, geom, z, -tau));
    if (z == 0.0) return {0.0, 0.0};

    switch (spec.family) {
        case KernelFamily::K1Ratio: {
            const cplx S(spec.tau0, tau);
            const cplx w = z * z + S * S;
            const cplx r = std::sqrt(w);
            return geom.mu * z * modified_bessel_k(1.0, geom.mu * r) / r;
        }
        case KernelFamily::K0Diff: {
            const cplx S(spec.tau0, tau);
            const double dm = spec.z0 - z, dp = spec.z0 + z;
            return modified_bessel_k(0.0, geom.mu * std::sqrt(dm * dm + S * S)) -
                   modified_bessel_k(0.0, geom.mu * std::sqrt(dp * dp + S * S));
        }
        case KernelFamily::IKQuarter:
            return kernel_I_family3(spec, geom, z, tau);
        case KernelFamily::KQuarterProd: {
            const double h = stencil_step(geom.mu);
            return -d1_7([&](double zz) { return bracket_family4(spec, geom, zz, tau); }, z, h);
        }
    }
    throw std::invalid_argument("kernel_I: bad family");
}

AmplitudeBundle kernel_bundle(const KernelSpec& spec, const WaveguideGeometry& geom,
                              double z, double tau) {
    AmplitudeBundle b;
    if (spec.family == KernelFamily::K1Ratio) {
        b = bundle_family1(spec, geom, z, tau);
    } else if (spec.family == KernelFamily::K0Diff) {
        b = bundle_family2(spec, geom, z, tau);
    } else {
        b = bundle_by_stencil(spec, geom, z, tau);
    }
    attach_amplitudes(b, spec, geom);
    return b;
}

}  // namespace dwg::kernels
