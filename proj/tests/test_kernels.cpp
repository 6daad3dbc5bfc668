#include "dwg/kernels.hpp"

#include <cmath>
#include <doctest.h>

#include "dwg/oracle.hpp"
#include "dwg/specfun.hpp"
#include "support/reference_values.hpp"

using dwg::cplx;
namespace kr = dwg::kernels;
namespace sf = dwg::specfun;

namespace {

constexpr double kPi = 3.14159265358979323846;

kr::KernelSpec make_spec(int family, double tau0, double z0) {
    kr::KernelSpec s;
    s.family = static_cast<kr::KernelFamily>(family);
    s.tau0 = tau0;
    s.z0 = z0;
    return s;
}

double rel_err(const cplx& got, const cplx& want) {
    const double s = std::abs(want);
    return s > 0 ? std::abs(got - want) / s : std::abs(got - want);
}

}  // namespace

TEST_CASE("waveguide geometry invariants") {
    const auto g = kr::WaveguideGeometry::with_radius(5.0);
    CHECK(g.k_perp * g.a == doctest::Approx(sf::first_j0_zero()).epsilon(1e-14));
    CHECK(g.mu * g.mu - g.k_perp * g.k_perp == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.mu >= 1.0);
    g.validate();
    const auto g2 = kr::WaveguideGeometry::with_mu(1.5);
    CHECK(g2.mu == doctest::Approx(1.5).epsilon(1e-12));
    g2.validate();
    CHECK_THROWS_AS(kr::WaveguideGeometry::with_radius(-1.0), std::domain_error);
}

TEST_CASE("kernel spec validation") {
    auto s = make_spec(1, 1.0, 0.0);
    s.validate();
    s.tau0 = -0.5;
    CHECK_THROWS_AS(s.validate(), std::domain_error);
    auto s4 = make_spec(4, 1.0, 0.0);
    CHECK_THROWS_AS(s4.validate(), std::domain_error);  // family 4 needs z0 > 0
    s4.z0 = 1.0;
    s4.validate();
}

TEST_CASE("spectral amplitude examples") {
    const auto geom = kr::WaveguideGeometry::with_mu(1.5);
    CHECK(std::abs(kr::spectral_A(make_spec(1, 1.0, 0.0), geom, 0.0)) == 0.0);
    CHECK(std::abs(kr::spectral_A(make_spec(2, 1.0, 2.0), geom, 0.0)) == 0.0);
    CHECK(std::abs(kr::spectral_A(make_spec(3, 1.0, 2.0), geom, 0.0)) == 0.0);
    CHECK(std::abs(kr::spectral_A(make_spec(4, 1.0, 2.0), geom, 0.0)) == 0.0);

    // direct substitution at k = mu for a unit-k_perp guide
    const auto gk1 = kr::WaveguideGeometry::with_mu(std::sqrt(2.0));
    CHECK(gk1.k_perp == doctest::Approx(1.0).epsilon(1e-12));
    const double mu = gk1.mu;
    const cplx got = kr::spectral_A(make_spec(1, 1.0, 0.0), gk1, mu);
    const double expected = (mu * mu + 1.0) * mu * std::exp(-mu * std::sqrt(2.0)) / (mu * std::sqrt(2.0));
    CHECK(got.real() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(got.imag() == 0.0);
}

TEST_CASE("kernel vanishes on the end face") {
    for (int fam = 1; fam <= 4; ++fam) {
        const auto geom = kr::WaveguideGeometry::with_mu(1.3);
        const auto spec = make_spec(fam, 1.0, 1.5);
        CHECK(kr::kernel_I(spec, geom, 0.0, 2.7) == cplx(0.0, 0.0));
    }
}

TEST_CASE("frozen kernel reference values") {
    for (const auto& r : refdata::kKernelRefs) {
        const auto geom = kr::WaveguideGeometry::with_mu(r.mu);
        const auto spec = make_spec(r.family, r.tau0, r.z0);
        const cplx got = kr::kernel_I(spec, geom, r.z, r.tau);
        INFO("family=", r.family, " z=", r.z, " tau=", r.tau, " mu=", r.mu);
        CHECK(rel_err(got, {r.i_re, r.i_im}) < 1e-7);
    }
}

TEST_CASE("family-1 closed value against quadrature") {
    const auto geom = kr::WaveguideGeometry::with_mu(1.5);
    const auto spec = make_spec(1, 0.8, 0.0);
    const double z = 1.0;
    const cplx direct = geom.mu * z *
                        sf::bessel_k(sf::BesselOrder::One, geom.mu * std::sqrt(z * z + 0.64)) /
                        std::sqrt(z * z + 0.64);
    const cplx closed = kr::kernel_I(spec, geom, z, 0.0);
    CHECK(rel_err(closed, direct) < 1e-13);
    const auto orc = dwg::oracle::oracle_I(spec, geom, z, 0.0);
    CHECK(rel_err(closed, orc.value) < 1e-8);
}

TEST_CASE("family-2 center identity") {
    const auto geom = kr::WaveguideGeometry::with_mu(1.5);
    const double z0 = 2.0, tau0 = 1.0;
    const auto spec = make_spec(2, tau0, z0);
    const cplx got = kr::kernel_I(spec, geom, z0, 0.0);
    const cplx want = sf::bessel_k(sf::BesselOrder::Zero, cplx(geom.mu * tau0, 0.0)) -
                      sf::bessel_k(sf::BesselOrder::Zero,
                                   cplx(geom.mu * std::sqrt(4.0 * z0 * z0 + tau0 * tau0), 0.0));
    CHECK(rel_err(got, want) < 1e-13);
}

TEST_CASE("closed form matches quadrature across families") {
    for (int fam = 1; fam <= 4; ++fam) {
        const auto geom = kr::WaveguideGeometry::with_mu(fam == 3 ? 1.05 : 1.5);
        const auto spec = make_spec(fam, 1.0, 1.5);
        for (const auto& [z, tau] : std::vector<std::pair<double, double>>{
                 {0.5, 0.0}, {1.6, 1.63}, {3.0, 7.0}, {12.0, 4.0}, {7.0, 18.0}}) {
            const cplx closed = kr::kernel_I(spec, geom, z, tau);
            const auto orc = dwg::oracle::oracle_I(spec, geom, z, tau);
            INFO("family=", fam, " z=", z, " tau=", tau);
            CHECK(std::abs(closed - orc.value) < 1e-6 * std::max(std::abs(orc.value), 1e-6));
        }
    }
}

TEST_CASE("derivative fields match Richardson differences") {
    for (int fam = 1; fam <= 4; ++fam) {
        const auto geom = kr::WaveguideGeometry::with_mu(1.2);
        const auto spec = make_spec(fam, 1.0, 1.5);
        for (const auto& [z, tau] : std::vector<std::pair<double, double>>{{1.3, 0.6}, {4.0, 3.0}}) {
            const auto b = kr::kernel_bundle(spec, geom, z, tau);
            const double h = 0.05;
            auto rich = [&](auto f, double x) {
                auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
                return (4.0 * d(h / 2) - d(h)) / 3.0;
            };
            const cplx iz = rich([&](double x) { return kr::kernel_I(spec, geom, x, tau); }, z);
            const cplx it = rich([&](double x) { return kr::kernel_I(spec, geom, z, x); }, tau);
            auto dz1 = [&](double x) { return kr::kernel_bundle(spec, geom, x, tau).I_z; };
            const cplx izz = rich(dz1, z);
            auto dt1 = [&](double x) { return kr::kernel_bundle(spec, geom, z, x).I_z; };
            const cplx izt = rich(dt1, tau);
            INFO("family=", fam, " z=", z, " tau=", tau);
            const double scale = std::max({std::abs(b.I_z), std::abs(b.I_tau), 1e-10});
            CHECK(std::abs(iz - b.I_z) / scale < 1e-5);
            CHECK(std::abs(it - b.I_tau) / scale < 1e-5);
            CHECK(std::abs(izz - b.I_zz) / std::max(std::abs(b.I_zz), scale) < 1e-5);
            CHECK(std::abs(izt - b.I_ztau) / std::max(std::abs(b.I_ztau), scale) < 1e-5);
        }
    }
}

TEST_CASE("kernel solves the dispersive wave equation") {
    // second tau-derivative by finite difference; mass term mu^2
    for (int fam = 1; fam <= 4; ++fam) {
        for (const double mu : {1.05, 1.5, 3.0}) {
            const auto geom = kr::WaveguideGeometry::with_mu(mu);
            const auto spec = make_spec(fam, 1.0, 1.5);
            for (const auto& [z, tau] : std::vector<std::pair<double, double>>{{1.1, 0.5}, {2.8, 2.0}}) {
                const auto b = kr::kernel_bundle(spec, geom, z, tau);
                const double h = 0.02;
                const cplx d2t = (kr::kernel_I(spec, geom, z, tau + h) - 2.0 * b.I +
                                  kr::kernel_I(spec, geom, z, tau - h)) /
                                 (h * h);
                const cplx resid = d2t - b.I_zz + mu * mu * b.I;
                const double scale = std::max({std::abs(b.I_zz), mu * mu * std::abs(b.I), 1e-12});
                INFO("family=", fam, " mu=", mu, " z=", z, " tau=", tau);
                CHECK(std::abs(resid) / scale < 1e-4);
            }
        }
    }
}

TEST_CASE("kernel is odd in z") {
    for (int fam = 1; fam <= 4; ++fam) {
        const auto geom = kr::WaveguideGeometry::with_mu(1.4);
        const auto spec = make_spec(fam, 1.0, 1.5);
        for (const auto& [z, tau] : std::vector<std::pair<double, double>>{
                 {0.9, 0.0}, {1.5, 0.7}, {2.6, 1.7}, {5.0, 9.0}}) {
            const cplx a = kr::kernel_I(spec, geom, z, tau);
            const cplx b = kr::kernel_I(spec, geom, -z, tau);
            INFO("family=", fam, " z=", z, " tau=", tau);
            CHECK(rel_err(a, -b) < 1e-12);
        }
    }
}

TEST_CASE("negative tau conjugates the kernel") {
    for (int fam = 1; fam <= 4; ++fam) {
        const auto geom = kr::WaveguideGeometry::with_mu(1.4);
        const auto spec = make_spec(fam, 1.0, 1.5);
        const cplx a = kr::kernel_I(spec, geom, 1.7, 2.3);
        const cplx b = kr::kernel_I(spec, geom, 1.7, -2.3);
        CHECK(rel_err(std::conj(a), b) < 1e-13);
    }
}

TEST_CASE("amplitude bundle vanishes correctly at z = 0") {
    for (int fam = 1; fam <= 4; ++fam) {
        const auto geom = kr::WaveguideGeometry::with_mu(1.3);
        auto spec = make_spec(fam, 1.0, 1.5);
        spec.A0 = {0.37, 0.0};
        const auto b = kr::kernel_bundle(spec, geom, 0.0, 1.9);
        INFO("family=", fam);
        CHECK(std::abs(b.F) == 0.0);
        CHECK(std::abs(b.G) == 0.0);
        CHECK(std::abs(b.I) == 0.0);
    }
}

TEST_CASE("bundle amplitude relations") {
    const auto geom = kr::WaveguideGeometry::with_mu(1.5);
    auto spec = make_spec(2, 1.0, 1.5);
    spec.A0 = {0.8, 0.0};
    const auto b = kr::kernel_bundle(spec, geom, 2.0, 1.0);
    const cplx iu(0, 1);
    CHECK(rel_err(b.F, spec.A0 * (geom.k_perp * geom.k_perp * b.I - b.I_zz)) < 1e-14);
    CHECK(rel_err(b.G, spec.A0 * (-iu * b.I - b.I_tau)) < 1e-14);
    CHECK(rel_err(b.G_z, spec.A0 * (-iu * b.I_z - b.I_ztau)) < 1e-14);
}

TEST_CASE("oracle equivalence grid") {
    // compressed version of the acceptance grid, one mu per family
    const double zs[] = {0.3, 3.0, 14.0};
    const double taus[] = {0.0, 2.0, 13.0};
    for (int fam = 1; fam <= 4; ++fam) {
        const auto geom = kr::WaveguideGeometry::with_mu(1.5);
        const auto spec = make_spec(fam, 1.0, 1.5);
        for (const double z : zs)
            for (const double tau : taus) {
                const cplx closed = kr::kernel_I(spec, geom, z, tau);
                const auto orc = dwg::oracle::oracle_I(spec, geom, z, tau);
                INFO("family=", fam, " z=", z, " tau=", tau);
                CHECK(std::abs(closed - orc.value) <= 1e-6 * std::max(std::abs(orc.value), 1e-6));
            }
    }
}

TEST_CASE("family-3 term is smooth through z = z0") {
    const auto geom = kr::WaveguideGeometry::with_mu(1.2);
    const auto spec = make_spec(3, 1.0, 1.5);
    // values straddling the fold must interpolate smoothly
    const cplx left = kr::kernel_I(spec, geom, spec.z0 - 1e-4, 0.8);
    const cplx mid = kr::kernel_I(spec, geom, spec.z0, 0.8);
    const cplx right = kr::kernel_I(spec, geom, spec.z0 + 1e-4, 0.8);
    CHECK(std::abs(left + right - 2.0 * mid) < 1e-6 * std::abs(mid));
}
