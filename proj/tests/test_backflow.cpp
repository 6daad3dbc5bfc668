#include "dwg/backflow.hpp"

#include <cmath>
#include <doctest.h>

#include "dwg/specfun.hpp"
#include "dwg/wavepacket.hpp"

using dwg::cplx;
namespace bf = dwg::backflow;
namespace kr = dwg::kernels;
namespace wp = dwg::wavepacket;

namespace {

constexpr double kPi = 3.14159265358979323846;

kr::KernelSpec make_spec(int family) {
    kr::KernelSpec s;
    s.family = static_cast<kr::KernelFamily>(family);
    s.tau0 = 1.0;
    s.z0 = family == 1 ? 0.0 : 1.5;
    return s;
}

wp::SpinState perp_spin(double phi_spin = 0.0) {
    wp::SpinState s;
    s.theta = 0.5 * kPi;
    s.phi_spin = phi_spin;
    return s;
}

}  // namespace

TEST_CASE("stationary-phase wavenumber") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    const double L = 100.0;
    CHECK(bf::k_parallel(geom, L, L * std::sqrt(2.0)) == doctest::Approx(geom.mu).epsilon(1e-12));
    double prev = bf::k_parallel(geom, L, 1.05 * L);
    for (double t = 1.2 * L; t < 40 * L; t *= 1.5) {
        const double k = bf::k_parallel(geom, L, t);
        CHECK(k < prev);
        prev = k;
    }
    CHECK(prev < 0.05);
    CHECK_THROWS_AS(bf::k_parallel(geom, L, L), std::domain_error);
    CHECK_THROWS_AS(bf::k_parallel(geom, L, 0.5 * L), std::domain_error);
}

TEST_CASE("asymptotic current sign structure") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    const auto spec = make_spec(1);
    bf::DetectorPlane plane{200.0, 400.0};

    // axis polarization: no negative values anywhere on the section
    wp::SpinState up;
    for (double rho = 0.1; rho < geom.a; rho += 0.35)
        for (double phi = 0.0; phi < 2 * kPi; phi += 0.5)
            CHECK(bf::asymptotic_jz(spec, geom, up, rho, phi, plane) >= 0.0);

    // late-time limit: sign approaches -sin(phi_spin - phi) J1
    bf::DetectorPlane late{200.0, 20.0 * 200.0};
    const auto spin = perp_spin(0.5 * kPi);
    const double v = bf::asymptotic_jz(spec, geom, spin, 4.0, 0.0, late);
    CHECK(v < 0.0);  // sin(phi_spin - phi) = 1 there

    // bracket sign independent of the spectral family
    for (double rho = 0.3; rho < geom.a; rho += 0.9)
        for (double phi = 0.2; phi < 2 * kPi; phi += 1.1) {
            int s0 = 0;
            for (int fam = 1; fam <= 4; ++fam) {
                const double u = bf::asymptotic_jz(make_spec(fam), geom, spin, rho, phi, plane);
                const int s = u > 0 ? 1 : (u < 0 ? -1 : 0);
                if (fam == 1)
                    s0 = s;
                else
                    CHECK(s == s0);
            }
        }
}

TEST_CASE("sufficiency inequality") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    bf::DetectorPlane plane{200.0, 4000.0};

    wp::SpinState up;  // theta = 0 never qualifies
    CHECK_FALSE(bf::backflow_sufficient(geom, up, 4.0, 0.0, plane));
    wp::SpinState down;
    down.theta = kPi;
    CHECK_FALSE(bf::backflow_sufficient(geom, down, 4.0, 0.0, plane));

    // perpendicular polarization qualifies near the rim at late times
    const auto spin = perp_spin(0.5 * kPi);
    const double rhs = 2.0 * bf::k_parallel(geom, plane.L, plane.t) / (geom.k_perp * geom.k_perp);
    REQUIRE(rhs < geom.a);
    CHECK(bf::backflow_sufficient(geom, spin, geom.a * 0.98, 0.0, plane));

    // the right-hand side decreases with time
    double prev = std::numeric_limits<double>::infinity();
    for (double t = 1.1 * plane.L; t < 50 * plane.L; t *= 2.0) {
        const double r = 2.0 * bf::k_parallel(geom, plane.L, t) / (geom.k_perp * geom.k_perp);
        CHECK(r < prev);
        prev = r;
    }
}

TEST_CASE("sufficiency implies a negative asymptotic current") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    const auto spec = make_spec(2);
    const auto spin = perp_spin(1.0);
    bf::DetectorPlane plane{200.0, 4000.0};
    const auto rep = bf::backflow_map(spec, geom, spin, plane, 60, 72, bf::MapMode::Asymptotic);
    int qualifying = 0;
    for (int i = 0; i < rep.n_rho; ++i)
        for (int j = 0; j < rep.n_phi; ++j) {
            const double rho = (i + 0.5) * geom.a / rep.n_rho;
            const double phi = (j + 0.5) * 2 * kPi / rep.n_phi;
            if (bf::backflow_sufficient(geom, spin, rho, phi, plane)) {
                ++qualifying;
                CHECK(rep.jz[static_cast<size_t>(i) * rep.n_phi + j] < 0.0);
            }
        }
    CHECK(qualifying > 0);
}

TEST_CASE("map reductions and axis-polarized emptiness") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    const auto spec = make_spec(1);
    bf::DetectorPlane plane{200.0, 400.0};

    wp::SpinState up;
    const auto rep0 = bf::backflow_map(spec, geom, up, plane, 50, 64, bf::MapMode::Asymptotic);
    CHECK(rep0.area_fraction == 0.0);
    CHECK(rep0.backflow_flux == 0.0);
    CHECK(rep0.total_flux > 0.0);

    const auto spin = perp_spin(0.3);
    const auto rep = bf::backflow_map(spec, geom, spin, plane, 50, 64, bf::MapMode::Asymptotic);
    CHECK(rep.backflow_flux <= 0.0);
    CHECK(rep.min_jz < 0.0);
    CHECK(rep.area_fraction > 0.0);
    CHECK(rep.area_fraction < 1.0);
    // mask consistent with cell values
    for (size_t i = 0; i < rep.jz.size(); ++i) CHECK(rep.mask[i] == (rep.jz[i] < 0.0 ? 1 : 0));
}

TEST_CASE("serial and parallel fills agree exactly") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    auto spec = make_spec(1);
    spec.A0 = wp::normalize(spec, geom);
    const auto spin = perp_spin(0.7);
    bf::DetectorPlane plane{120.0, 300.0};
    for (const auto mode : {bf::MapMode::Asymptotic, bf::MapMode::Exact}) {
        const auto a = bf::backflow_map(spec, geom, spin, plane, 24, 32, mode, true);
        const auto b = bf::backflow_map(spec, geom, spin, plane, 24, 32, mode, false);
        CHECK(a.jz == b.jz);
        CHECK(a.mask == b.mask);
        CHECK(a.total_flux == b.total_flux);
        CHECK(a.backflow_flux == b.backflow_flux);
        CHECK(a.area_fraction == b.area_fraction);
    }
}

TEST_CASE("azimuthal equivariance of the asymptotic mask") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    const auto spec = make_spec(1);
    bf::DetectorPlane plane{200.0, 1000.0};
    const int n_phi = 64;
    const int shift = 8;  // rotate the spin azimuth by exactly 8 cells
    const double delta = 2.0 * kPi * shift / n_phi;
    const auto repA = bf::backflow_map(spec, geom, perp_spin(0.0), plane, 24, n_phi,
                                       bf::MapMode::Asymptotic);
    const auto repB = bf::backflow_map(spec, geom, perp_spin(delta), plane, 24, n_phi,
                                       bf::MapMode::Asymptotic);
    for (int i = 0; i < repA.n_rho; ++i)
        for (int j = 0; j < n_phi; ++j)
            CHECK(repA.mask[static_cast<size_t>(i) * n_phi + j] ==
                  repB.mask[static_cast<size_t>(i) * n_phi + (j + shift) % n_phi]);
}

TEST_CASE("spin term flips under azimuthal mirror") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    const auto spec = make_spec(1);
    const auto spin = perp_spin(0.9);
    bf::DetectorPlane plane{200.0, 700.0};
    for (const double rho : {1.0, 2.5, 4.0}) {
        for (const double phi : {0.2, 1.5, 3.3}) {
            const double mirror = 2.0 * spin.phi_spin - phi;
            const double a = bf::asymptotic_jz(spec, geom, spin, rho, phi, plane);
            const double b = bf::asymptotic_jz(spec, geom, spin, rho, mirror, plane);
            // J0 part is even under the mirror, the spin part odd: the sum
            // of the pair isolates twice the even part
            wp::SpinState axial;
            const double even = bf::asymptotic_jz(spec, geom, axial, rho, phi, plane);
            CHECK(a + b == doctest::Approx(2.0 * even).epsilon(1e-10));
        }
    }
}

TEST_CASE("persistence scan: fraction grows and saturates near one half") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    const auto spec = make_spec(1);
    const auto spin = perp_spin(0.0);
    const double L = 200.0;
    std::vector<double> times;
    for (const double m : {1.1, 1.5, 2.0, 5.0, 20.0}) times.push_back(m * L);
    const auto reps = bf::persistence_scan(spec, geom, spin, L, times, bf::MapMode::Asymptotic,
                                           100, 128);
    for (size_t i = 1; i < reps.size(); ++i)
        CHECK(reps[i].area_fraction >= reps[i - 1].area_fraction);
    CHECK(reps.back().area_fraction > 0.40);
    CHECK(reps.back().area_fraction < 0.50);
}

TEST_CASE("backflow fades as the guide opens up") {
    const auto spec = make_spec(1);
    const auto spin = perp_spin(0.0);
    double prev = 1.0;
    std::vector<double> fractions;
    for (const double a : {5.0, 50.0, 500.0}) {
        const auto geom = kr::WaveguideGeometry::with_radius(a);
        bf::DetectorPlane plane{200.0, 4000.0};
        const auto rep = bf::backflow_map(spec, geom, spin, plane, 80, 96, bf::MapMode::Asymptotic);
        fractions.push_back(rep.area_fraction);
        CHECK(rep.area_fraction < prev);
        prev = rep.area_fraction;
    }
    CHECK(fractions.back() < 0.05);
}

TEST_CASE("exact and asymptotic masks agree on most cells at large distance") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    auto spec = make_spec(1);
    spec.A0 = wp::normalize(spec, geom);
    const auto spin = perp_spin(0.0);
    bf::DetectorPlane plane{200.0, 400.0};
    const int n_rho = 48, n_phi = 64;
    const auto ex = bf::backflow_map(spec, geom, spin, plane, n_rho, n_phi, bf::MapMode::Exact);
    const auto as = bf::backflow_map(spec, geom, spin, plane, n_rho, n_phi, bf::MapMode::Asymptotic);
    int agree = 0;
    for (size_t i = 0; i < ex.mask.size(); ++i) agree += ex.mask[i] == as.mask[i];
    CHECK(agree >= static_cast<int>(0.9 * ex.mask.size()));
    CHECK(ex.area_fraction > 0.0);
}

TEST_CASE("asymptotic warning below the trusted distance") {
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    const auto spec = make_spec(1);
    bf::DetectorPlane plane{30.0, 90.0};
    const auto rep = bf::backflow_map(spec, geom, perp_spin(0.0), plane, 8, 8,
                                      bf::MapMode::Asymptotic);
    CHECK(rep.warnings.size() == 1);
    bf::DetectorPlane far{60.0, 180.0};
    const auto rep2 = bf::backflow_map(spec, geom, perp_spin(0.0), far, 8, 8,
                                       bf::MapMode::Asymptotic);
    CHECK(rep2.warnings.empty());
}

TEST_CASE("plane validation") {
    bf::DetectorPlane bad{100.0, 90.0};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    const auto geom = kr::WaveguideGeometry::with_radius(5.0);
    const auto spec = make_spec(1);
    CHECK_THROWS_AS(
        bf::backflow_map(spec, geom, perp_spin(0.0), bad, 4, 4, bf::MapMode::Asymptotic),
        std::domain_error);
}
