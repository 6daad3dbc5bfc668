#include "dwg/specfun.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>

namespace dwg::specfun {

namespace {

using cld = std::complex<long double>;

constexpr long double kPi = 3.14159265358979323846264338327950288L;
constexpr long double kEulerGamma = 0.57721566490153286060651209008240243L;
constexpr long double kSeriesEps = 1e-21L;
constexpr int kSeriesMaxTerms = 400;
constexpr double kSwitchRadius = 14.0;
// above this value of |z| + Re(z) the ascending-series route for K loses
// more than ~1e-11 to cancellation; hand over to the continued fraction
constexpr double kCf2Threshold = 18.0;

bool on_closed_negative_axis(const cplx& z) {
    return z.imag() == 0.0 && z.real() <= 0.0;
}

bool is_integer(long double nu) { return nu == std::floor(nu); }

cld to_cld(const cplx& z) { return {static_cast<long double>(z.real()), static_cast<long double>(z.imag())}; }

cplx to_cplx(const cld& z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

// sum_m (z/2)^{2m} / (m! Gamma(m+nu+1)).  Terms tracked against the largest
// partial sum so the stopping test survives interior cancellation.
cld i_scaled_sum(long double nu, cld z) {
    const cld q = 0.25L * z * z;
    cld term = 1.0L / std::tgamma(nu + 1.0L);
    cld sum = term;
    long double peak = std::abs(sum);
    for (int m = 1; m <= kSeriesMaxTerms; ++m) {
        term *= q / (static_cast<long double>(m) * (static_cast<long double>(m) + nu));
        sum += term;
        peak = std::max(peak, std::abs(sum));
        if (std::abs(term) < kSeriesEps * peak && m > 4) break;
    }
    return sum;
}

cld i_series(long double nu, cld z) {
    const cld half = 0.5L * z;
    cld pref;
    if (z.imag() == 0.0L && z.real() > 0.0L) {
        pref = std::pow(z.real() * 0.5L, nu);
    } else {
        pref = std::exp(nu * std::log(half));
    }
    return pref * i_scaled_sum(nu, z);
}

// K_0 and K_1 by the logarithmic ascending series.
cld k_series_integer(int n, cld z) {
    const cld q = 0.25L * z * z;
    const cld lg = std::log(0.5L * z);
    if (n == 0) {
        // K0 = -(log(z/2)+gamma) I0 + sum_{m>=1} h_m q^m/(m!)^2
        cld t = 1.0L;  // q^m/(m!)^2 at m=0
        cld i0 = t;
        cld corr = 0.0L;
        long double h = 0.0L;
        long double peak = 1.0L;
        for (int m = 1; m <= kSeriesMaxTerms; ++m) {
            t *= q / static_cast<long double>(m * m);
            h += 1.0L / m;
            i0 += t;
            corr += t * h;
            peak = std::max(peak, std::abs(i0) + std::abs(corr));
            if (std::abs(t) * (1.0L + h) < kSeriesEps * peak && m > 4) break;
        }
        return -(lg + kEulerGamma) * i0 + corr;
    }
    // K1 = 1/z + (log(z/2)+gamma) I1 - (z/4) sum_m (h_m + h_{m+1}) q^m/(m!(m+1)!)
    cld t = 1.0L;  // q^m/(m!(m+1)!) at m=0
    cld i1sum = t;
    long double h = 0.0L;      // h_m
    long double hn = 1.0L;     // h_{m+1}
    cld corr = t * (h + hn);
    long double peak = 1.0L;
    for (int m = 1; m <= kSeriesMaxTerms; ++m) {
        t *= q / (static_cast<long double>(m) * static_cast<long double>(m + 1));
        h += 1.0L / m;
        hn += 1.0L / (m + 1);
        i1sum += t;
        corr += t * (h + hn);
        peak = std::max(peak, std::abs(i1sum) + std::abs(corr));
        if (std::abs(t) * (1.0L + h + hn) < kSeriesEps * peak && m > 4) break;
    }
    const cld i1 = 0.5L * z * i1sum;
    return 1.0L / z + (lg + kEulerGamma) * i1 - 0.25L * z * corr;
}

cld k_series(long double nu, cld z) {
    nu = std::fabs(nu);
    if (is_integer(nu)) return k_series_integer(static_cast<int>(nu), z);
    // K_nu = pi/2 (I_{-nu} - I_nu) / sin(nu pi)
    return 0.5L * kPi * (i_series(-nu, z) - i_series(nu, z)) / std::sin(nu * kPi);
}

// Large-argument expansion sum(z) = sum_k a_k(nu) z^{-k} with
// a_k = prod_{j<=k} (4nu^2-(2j-1)^2)/(8j); sign = -1 alternates the terms.
cld asymptotic_sum(long double nu, cld z, int sign) {
    const long double fournu2 = 4.0L * nu * nu;
    cld term = 1.0L;
    cld sum = term;
    long double prev = 1.0L;
    for (int k = 1; k <= 120; ++k) {
        const long double odd = 2.0L * k - 1.0L;
        term *= (fournu2 - odd * odd) / (8.0L * k) / z * static_cast<long double>(sign);
        const long double mag = std::abs(term);
        if (mag > prev) break;  // past the optimal truncation point
        sum += term;
        prev = mag;
        if (mag < kSeriesEps * std::abs(sum)) break;
    }
    return sum;
}

cld k_asymptotic(long double nu, cld z) {
    nu = std::fabs(nu);
    return std::sqrt(0.5L * kPi / z) * std::exp(-z) * asymptotic_sum(nu, z, +1);
}

// Steed's continued fraction for K_nu, K_{nu+1}, |nu| <= 1/2, Re z > 0.
// Covers the mid-range pocket where K is recessive and the ascending series
// loses ~exp(|z| + Re z) * eps to cancellation.
void k_cf2(long double nu, cld z, cld& knu, cld& knu1) {
    const long double a1 = 0.25L - nu * nu;
    cld b = 2.0L * (1.0L + z);
    cld d = 1.0L / b;
    cld delh = d, h = delh;
    cld q1 = 0.0L, q2 = 1.0L;
    cld q = a1;
    long double c = a1;
    long double a = -a1;
    cld s = 1.0L + q * delh;
    for (int i = 2; i <= 2000; ++i) {
        a -= 2.0L * (i - 1);
        c = -a * c / i;
        const cld qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0L;
        d = 1.0L / (a * d + b);
        delh = (b * d - 1.0L) * delh;
        h += delh;
        const cld dels = q * delh;
        s += dels;
        if (std::abs(dels) < kSeriesEps * std::abs(s)) break;
    }
    h = a1 * h;
    knu = std::sqrt(kPi / (2.0L * z)) * std::exp(-z) / s;
    knu1 = knu * (nu + z + 0.5L - h) / z;
}

cld k_cf2_order(long double nu, cld z) {
    // reduce to a base order in [-1/2, 1/2), then recur upward in steps of 1
    const long double t = std::fabs(nu);
    const int steps = static_cast<int>(std::floor(t + 0.5L));
    const long double nur = t - steps;  // in [-1/2, 1/2)
    cld ka, kb;
    k_cf2(nur, z, ka, kb);  // K_{nur}, K_{nur+1}
    if (steps == 0) return ka;
    long double ord = nur + 1.0L;
    for (int i = 1; i < steps; ++i, ord += 1.0L) {
        const cld k2 = ka + 2.0L * ord / z * kb;
        ka = kb;
        kb = k2;
    }
    return kb;
}

cld i_asymptotic(long double nu, cld z) {
    const cld pref = 1.0L / std::sqrt(2.0L * kPi * z);
    const cld grow = std::exp(z) * asymptotic_sum(nu, z, -1);
    // subdominant reflected term; the phase factor depends on the half-plane
    const long double s = (z.imag() >= 0.0L) ? 1.0L : -1.0L;
    const cld sigma = std::exp(cld(0.0L, s * (nu + 0.5L) * kPi));
    const cld decay = sigma * std::exp(-z) * asymptotic_sum(nu, z, +1);
    cld val = pref * (grow + decay);
    if (z.imag() == 0.0L && z.real() > 0.0L) val = cld(val.real(), 0.0L);
    return val;
}

void check_finite(const cplx& v, const char* what) {
    if (!is_finite(v)) throw std::domain_error(std::string(what) + ": result not finite");
}

}  // namespace

double order_value(BesselOrder nu) {
    switch (nu) {
        case BesselOrder::MinusQuarter: return -0.25;
        case BesselOrder::Zero: return 0.0;
        case BesselOrder::Quarter: return 0.25;
        case BesselOrder::One: return 1.0;
    }
    throw std::invalid_argument("order_value: bad BesselOrder");
}

double bessel_j(int order, double x) {
    if (order != 0 && order != 1) throw std::domain_error("bessel_j: order must be 0 or 1");
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_j: x must be finite and >= 0");
    return boost::math::cyl_bessel_j(order, x);
}

double first_j0_zero() {
    static const double j01 = boost::math::cyl_bessel_j_zero(0.0, 1);
    return j01;
}

namespace detail {

double switch_radius() { return kSwitchRadius; }

cplx bessel_k_series_path(double nu, cplx z) { return to_cplx(k_series(nu, to_cld(z))); }
cplx bessel_k_asymptotic_path(double nu, cplx z) { return to_cplx(k_asymptotic(nu, to_cld(z))); }
cplx bessel_k_cf_path(double nu, cplx z) { return to_cplx(k_cf2_order(nu, to_cld(z))); }
cplx bessel_i_series_path(double nu, cplx z) { return to_cplx(i_series(nu, to_cld(z))); }
cplx bessel_i_asymptotic_path(double nu, cplx z) { return to_cplx(i_asymptotic(nu, to_cld(z))); }

cplx bessel_i_scaled_series_sum(double nu, cplx z) {
    return to_cplx(i_scaled_sum(nu, to_cld(z)));
}

cplx modified_bessel_k(double nu, cplx z) {
    if (z == cplx(0.0, 0.0) || on_closed_negative_axis(z))
        throw std::domain_error("bessel_k: argument on the closed negative real axis");
    const cld zl = to_cld(z);
    const double r = std::abs(z);
    const long double t = std::fabs(static_cast<long double>(nu));
    cplx v;
    if (r >= kSwitchRadius) {
        v = to_cplx(k_asymptotic(t, zl));
    } else if (r + z.real() > kCf2Threshold) {
        v = to_cplx(k_cf2_order(t, zl));
    } else if (is_integer(t) && t >= 2.0L) {
        // series only covers orders 0 and 1 for the integer case
        cld ka = k_series(0.0L, zl), kb = k_series(1.0L, zl);
        for (long double ord = 1.0L; ord < t; ord += 1.0L) {
            const cld k2 = ka + 2.0L * ord / zl * kb;
            ka = kb;
            kb = k2;
        }
        v = to_cplx(kb);
    } else {
        v = to_cplx(k_series(t, zl));
    }
    check_finite(v, "bessel_k");
    return v;
}

cplx modified_bessel_i(double nu, cplx z) {
    if (z == cplx(0.0, 0.0)) {
        if (nu < 0.0) throw std::domain_error("bessel_i: divergent at z = 0 for negative order");
        return nu == 0.0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    }
    if (!is_integer(nu) && on_closed_negative_axis(z))
        throw std::domain_error("bessel_i: argument on the closed negative real axis");
    const cld zl = to_cld(z);
    const cplx v = std::abs(z) < kSwitchRadius ? to_cplx(i_series(nu, zl))
                                               : to_cplx(i_asymptotic(nu, zl));
    check_finite(v, "bessel_i");
    return v;
}

}  // namespace detail

cplx bessel_k(BesselOrder nu, cplx z) { return detail::modified_bessel_k(order_value(nu), z); }

cplx bessel_i(BesselOrder nu, cplx z) { return detail::modified_bessel_i(order_value(nu), z); }

}  // namespace dwg::specfun
