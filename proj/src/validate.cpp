#include "dwg/validate.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "dwg/specfun.hpp"

namespace dwg::validate {

namespace {

constexpr double kPi = 3.14159265358979323846;

using kernels::KernelFamily;
using kernels::KernelSpec;
using kernels::WaveguideGeometry;
using wavepacket::CylPoint;
using wavepacket::SpinState;

struct Harness {
    std::vector<CheckResult> results;

    void run(const std::string& name, const std::function<std::string()>& body) {
        CheckResult r;
        r.name = name;
        try {
            r.detail = body();
            r.passed = r.detail.empty();
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        results.push_back(std::move(r));
    }
};

std::string fail_if(bool bad, const std::string& msg) { return bad ? msg : std::string(); }

std::string fmt_fail(const char* what, double got, double limit) {
    std::ostringstream os;
    os << what << ": " << got << " exceeds " << limit;
    return os.str();
}

double rel_diff(const cplx& a, const cplx& b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0 ? std::abs(a - b) / s : 0.0;
}

std::vector<KernelSpec> family_variants(const KernelSpec& base) {
    std::vector<KernelSpec> v;
    for (const auto fam : {KernelFamily::K1Ratio, KernelFamily::K0Diff, KernelFamily::IKQuarter,
                           KernelFamily::KQuarterProd}) {
        KernelSpec s = base;
        s.family = fam;
        s.A0 = {1.0, 0.0};
        if (fam != KernelFamily::K1Ratio && !(s.z0 > 0.0)) s.z0 = 1.5;
        v.push_back(s);
    }
    return v;
}

}  // namespace

std::vector<CheckResult> run_validation(const Suite& suite) {
    Harness h;
    const auto& geom = suite.geom;
    const auto& spin = suite.spin;
    auto quad = suite.quadrature;

    h.run("specfun-wronskian", [&] {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> mag(0.2, 50.0), ang(-1.4, 1.4);
        const int n = suite.fast ? 40 : 200;
        for (int i = 0; i < n; ++i) {
            const cplx z = std::polar(mag(rng), ang(rng));
            for (const double nu : {0.0, 0.25}) {
                const cplx w = specfun::detail::modified_bessel_i(nu, z) *
                                   specfun::detail::modified_bessel_k(nu + 1, z) +
                               specfun::detail::modified_bessel_i(nu + 1, z) *
                                   specfun::detail::modified_bessel_k(nu, z);
                const double err = std::abs(w - 1.0 / z) * std::abs(z);
                if (err > 1e-9) return fmt_fail("wronskian residual", err, 1e-9);
            }
        }
        return std::string();
    });

    h.run("specfun-conjugation", [&] {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> mag(0.2, 40.0), ang(0.05, 3.0);
        const int n = suite.fast ? 25 : 100;
        for (int i = 0; i < n; ++i) {
            const cplx z = std::polar(mag(rng), ang(rng));
            for (const double nu : {-0.25, 0.0, 0.25, 1.0}) {
                const double dk = rel_diff(specfun::detail::modified_bessel_k(nu, std::conj(z)),
                                           std::conj(specfun::detail::modified_bessel_k(nu, z)));
                const double di = rel_diff(specfun::detail::modified_bessel_i(nu, std::conj(z)),
                                           std::conj(specfun::detail::modified_bessel_i(nu, z)));
                if (dk > 1e-12 || di > 1e-12)
                    return fmt_fail("conjugation asymmetry", std::max(dk, di), 1e-12);
            }
        }
        return std::string();
    });

    h.run("specfun-k0-decay", [&] {
        double prev = std::numeric_limits<double>::infinity();
        for (double x = 0.1; x <= 50.0; x += 0.5) {
            const double v = std::abs(specfun::bessel_k(specfun::BesselOrder::Zero, cplx(x, 0)));
            if (v >= prev) return std::string("|K0| not strictly decreasing at x = ") + std::to_string(x);
            prev = v;
        }
        return std::string();
    });

    h.run("kernels-oracle-agreement", [&] {
        const auto zs = suite.fast ? std::vector<double>{0.7, 3.0, 11.0}
                                   : std::vector<double>{0.3, 1.0, 3.0, 7.0, 14.0, 20.0};
        const auto taus = suite.fast ? std::vector<double>{0.0, 2.0, 9.0}
                                     : std::vector<double>{0.0, 0.7, 2.0, 6.0, 13.0, 20.0};
        for (const auto& spec : family_variants(suite.spec)) {
            for (const double z : zs)
                for (const double tau : taus) {
                    const cplx closed = kernels::kernel_I(spec, geom, z, tau);
                    const auto orc = oracle::oracle_I(spec, geom, z, tau, quad);
                    const double tol = 1e-6 * std::max(std::abs(orc.value), 1e-6);
                    if (std::abs(closed - orc.value) > tol)
                        return fmt_fail("closed-form vs quadrature", std::abs(closed - orc.value), tol);
                }
        }
        return std::string();
    });

    h.run("kernels-derivative-consistency", [&] {
        const double hs = 0.05;
        const auto pts = suite.fast
                             ? std::vector<std::pair<double, double>>{{1.3, 0.6}, {4.0, 3.0}}
                             : std::vector<std::pair<double, double>>{{0.8, 0.0}, {1.3, 0.6}, {4.0, 3.0}, {9.0, 7.5}};
        for (const auto& spec : family_variants(suite.spec)) {
            for (const auto& [z, tau] : pts) {
                const auto b = kernels::kernel_bundle(spec, geom, z, tau);
                auto rich = [&](const std::function<cplx(double)>& f, double x) {
                    auto diff = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
                    return (4.0 * diff(hs / 2) - diff(hs)) / 3.0;
                };
                const cplx dz = rich([&](double x) { return kernels::kernel_I(spec, geom, x, tau); }, z);
                const cplx dt = rich([&](double x) { return kernels::kernel_I(spec, geom, z, x); }, tau);
                const double scale = std::max({std::abs(b.I_z), std::abs(b.I_tau), 1e-10});
                const double err = std::max(std::abs(dz - b.I_z), std::abs(dt - b.I_tau)) / scale;
                if (err > 1e-5) return fmt_fail("derivative mismatch", err, 1e-5);
            }
        }
        return std::string();
    });

    h.run("kernels-klein-gordon", [&] {
        const double hs = 0.02;
        for (const auto& spec : family_variants(suite.spec)) {
            for (const auto& [z, tau] : std::vector<std::pair<double, double>>{{1.1, 0.5}, {3.2, 2.4}}) {
                const auto b = kernels::kernel_bundle(spec, geom, z, tau);
                auto I_of_tau = [&](double x) { return kernels::kernel_I(spec, geom, z, x); };
                const cplx d2t = (I_of_tau(tau + hs) - 2.0 * b.I + I_of_tau(tau - hs)) / (hs * hs);
                const cplx resid = d2t - b.I_zz + geom.mu * geom.mu * b.I;
                const double scale = std::max(std::abs(b.I_zz), geom.mu * geom.mu * std::abs(b.I));
                if (std::abs(resid) > 1e-4 * std::max(scale, 1e-8))
                    return fmt_fail("Klein-Gordon residual", std::abs(resid) / scale, 1e-4);
            }
        }
        return std::string();
    });

    h.run("kernels-odd-symmetry", [&] {
        for (const auto& spec : family_variants(suite.spec)) {
            for (const auto& [z, tau] : std::vector<std::pair<double, double>>{{0.9, 0.0}, {2.6, 1.7}}) {
                const cplx a = kernels::kernel_I(spec, geom, z, tau);
                const cplx b = kernels::kernel_I(spec, geom, -z, tau);
                if (rel_diff(a, -b) > 1e-12) return std::string("kernel not odd in z");
            }
        }
        return std::string();
    });

    h.run("bundle-algebra", [&] {
        for (const auto& spec : family_variants(suite.spec)) {
            const auto b = kernels::kernel_bundle(spec, geom, 2.2, 1.1);
            const cplx iu(0, 1);
            const cplx f = spec.A0 * (geom.k_perp * geom.k_perp * b.I - b.I_zz);
            const cplx g = spec.A0 * (-iu * b.I - b.I_tau);
            const cplx gz = spec.A0 * (-iu * b.I_z - b.I_ztau);
            if (rel_diff(f, b.F) > 1e-14 || rel_diff(g, b.G) > 1e-14 || rel_diff(gz, b.G_z) > 1e-14)
                return std::string("amplitude fields disagree with their defining combinations");
        }
        return std::string();
    });

    h.run("boundary-conditions", [&] {
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> uz(0.1, 5.0), uphi(0.0, 2 * kPi), urho(0.0, geom.a);
        const int n = suite.fast ? 20 : 100;
        for (int i = 0; i < n; ++i) {
            const double t = 0.4 + 0.1 * (i % 7);
            CylPoint edge{geom.a, uphi(rng), uz(rng)};
            auto psi = wavepacket::evaluate_bispinor(suite.spec, geom, spin, edge, t);
            auto cur = wavepacket::density_and_current(psi, edge.phi);
            double scale = std::max(psi.density(), 1e-300);
            if (std::abs(psi.c1) > 1e-12 * std::sqrt(scale) || std::abs(psi.c2) > 1e-12 * std::sqrt(scale))
                return std::string("large components survive at rho = a");
            if (std::abs(cur.j_rho) > 1e-12 * scale) return std::string("radial current leaks at rho = a");

            CylPoint face{urho(rng), uphi(rng), 0.0};
            psi = wavepacket::evaluate_bispinor(suite.spec, geom, spin, face, t);
            cur = wavepacket::density_and_current(psi, face.phi);
            scale = std::max(psi.density(), 1e-300);
            if (std::abs(psi.c1) > 1e-12 * std::sqrt(scale) || std::abs(psi.c2) > 1e-12 * std::sqrt(scale))
                return std::string("large components survive at z = 0");
            if (std::abs(cur.j_z) > 1e-12 * scale) return std::string("axial current leaks at z = 0");
        }
        return std::string();
    });

    h.run("current-consistency", [&] {
        std::mt19937 rng(31);
        std::uniform_real_distribution<double> urho(0.05, geom.a * 0.99), uphi(0.0, 2 * kPi),
            uz(0.2, 6.0), ut(0.1, 4.0);
        const int n = suite.fast ? 10 : 50;
        for (int i = 0; i < n; ++i) {
            const CylPoint p{urho(rng), uphi(rng), uz(rng)};
            const double t = ut(rng);
            const auto psi = wavepacket::evaluate_bispinor(suite.spec, geom, spin, p, t);
            const double jz_matrix = wavepacket::density_and_current(psi, p.phi).j_z;
            const double jz_closed = wavepacket::current_z_closed(suite.spec, geom, spin, p, t);
            const double scale = std::max({std::fabs(jz_matrix), std::fabs(jz_closed), 1e-300});
            if (std::fabs(jz_matrix - jz_closed) > 1e-12 * scale)
                return fmt_fail("axial current path disagreement",
                                std::fabs(jz_matrix - jz_closed) / scale, 1e-12);
        }
        return std::string();
    });

    h.run("current-split-sum", [&] {
        const CylPoint p{geom.a * 0.6, 1.1, 2.5};
        const auto split = wavepacket::current_z_split(suite.spec, geom, spin, p, 1.7);
        const double total = wavepacket::current_z_closed(suite.spec, geom, spin, p, 1.7);
        return fail_if(std::fabs(split.convective + split.spin_term - total) >
                           1e-14 * std::max(std::fabs(total), 1e-300),
                       "split terms do not sum to the closed form");
    });

    h.run("normalization-duality", [&] {
        for (const auto& spec : family_variants(suite.spec)) {
            const double ks = oracle::norm_kspace(spec, geom, quad).value;
            const double zs = oracle::norm_zspace(spec, geom, quad).value;
            const double delta = std::fabs(zs / (kPi * ks) - 1.0);
            if (delta > 1e-6) return fmt_fail("normalization duality delta", delta, 1e-6);
        }
        return std::string();
    });

    h.run("norm-conservation", [&] {
        KernelSpec spec = suite.spec;
        const auto times = suite.fast ? std::vector<double>{0.0, 1.0}
                                      : std::vector<double>{0.0, 1.0, 5.0, 20.0};
        for (const double multiple : times) {
            const double t = multiple * geom.a;
            const double norm = wavepacket::total_norm(spec, geom, spin, t, quad);
            if (std::fabs(norm - 1.0) > 1e-6)
                return fmt_fail("norm drift", std::fabs(norm - 1.0), 1e-6);
        }
        return std::string();
    });

    h.run("continuity", [&] {
        std::mt19937 rng(41);
        std::uniform_real_distribution<double> urho(0.3, geom.a * 0.9), uphi(0.0, 2 * kPi),
            uz(0.5, 4.0), ut(0.3, 3.0);
        const double hd = 1e-3;
        const int n = suite.fast ? 5 : 10;
        for (int i = 0; i < n; ++i) {
            const double rho = urho(rng), phi = uphi(rng), z = uz(rng), t = ut(rng);
            const double x = rho * std::cos(phi), y = rho * std::sin(phi);
            auto sample = [&](double xx, double yy, double zz, double tt) {
                CylPoint q{std::hypot(xx, yy), std::atan2(yy, xx), zz};
                const auto psi = wavepacket::evaluate_bispinor(suite.spec, geom, spin, q, tt);
                auto cur = wavepacket::density_and_current(psi, q.phi);
                const double cphi = std::cos(q.phi), sphi = std::sin(q.phi);
                return std::array<double, 4>{cur.density,
                                             cur.j_rho * cphi - cur.j_phi * sphi,
                                             cur.j_rho * sphi + cur.j_phi * cphi,
                                             cur.j_z};
            };
            const double drho_dt = (sample(x, y, z, t + hd)[0] - sample(x, y, z, t - hd)[0]) / (2 * hd);
            const double djx = (sample(x + hd, y, z, t)[1] - sample(x - hd, y, z, t)[1]) / (2 * hd);
            const double djy = (sample(x, y + hd, z, t)[2] - sample(x, y - hd, z, t)[2]) / (2 * hd);
            const double djz = (sample(x, y, z + hd, t)[3] - sample(x, y, z - hd, t)[3]) / (2 * hd);
            const double resid = drho_dt + djx + djy + djz;
            const double scale = std::fabs(drho_dt) + std::fabs(djx) + std::fabs(djy) + std::fabs(djz) + 1e-300;
            if (std::fabs(resid) / scale > 1e-4)
                return fmt_fail("continuity residual", std::fabs(resid) / scale, 1e-4);
        }
        return std::string();
    });

    h.run("dirac-residual", [&] {
        std::mt19937 rng(53);
        std::uniform_real_distribution<double> urho(0.3, geom.a * 0.9), uphi(0.0, 2 * kPi), uz(0.5, 4.0);
        const int n = suite.fast ? 5 : 20;
        for (int i = 0; i < n; ++i) {
            const CylPoint p{urho(rng), uphi(rng), uz(rng)};
            const double r = wavepacket::dirac_residual(suite.spec, geom, spin, p, 1.0, 1e-3);
            if (r > 1e-4) return fmt_fail("evolution residual", r, 1e-4);
        }
        return std::string();
    });

    h.run("backflow-sufficiency", [&] {
        backflow::DetectorPlane plane;
        plane.L = 200.0;
        plane.t = 20.0 * plane.L;
        SpinState perp;
        perp.theta = 0.5 * kPi;
        const auto rep = backflow::backflow_map(suite.spec, geom, perp, plane, 50, 64,
                                                backflow::MapMode::Asymptotic);
        int qualifying = 0;
        for (int i = 0; i < rep.n_rho; ++i)
            for (int j = 0; j < rep.n_phi; ++j) {
                const double rho = (i + 0.5) * geom.a / rep.n_rho;
                const double phi = (j + 0.5) * 2.0 * kPi / rep.n_phi;
                if (backflow::backflow_sufficient(geom, perp, rho, phi, plane)) {
                    ++qualifying;
                    if (!rep.mask[static_cast<size_t>(i) * rep.n_phi + j])
                        return std::string("sufficiency inequality violated by the asymptotic map");
                }
            }
        return fail_if(qualifying == 0, "sufficiency region unexpectedly empty at t = 20 L");
    });

    h.run("backflow-axis-polarized", [&] {
        backflow::DetectorPlane plane;
        plane.L = 200.0;
        plane.t = 2.0 * plane.L;
        SpinState axial;
        axial.theta = 0.0;
        const auto rep = backflow::backflow_map(suite.spec, geom, axial, plane, 40, 48,
                                                backflow::MapMode::Asymptotic);
        return fail_if(rep.area_fraction != 0.0, "axial polarization produced backflow");
    });

    h.run("asymptotic-sign-invariance", [&] {
        backflow::DetectorPlane plane;
        plane.L = 200.0;
        plane.t = 2.0 * plane.L;
        std::vector<std::vector<int>> signs;
        for (const auto& spec : family_variants(suite.spec)) {
            std::vector<int> s;
            for (double rho = 0.05 * geom.a; rho < geom.a; rho += 0.1 * geom.a)
                for (double phi = 0.1; phi < 2 * kPi; phi += 0.3) {
                    const double v = backflow::asymptotic_jz(spec, geom, spin, rho, phi, plane);
                    s.push_back(v > 0 ? 1 : (v < 0 ? -1 : 0));
                }
            signs.push_back(std::move(s));
        }
        for (size_t f = 1; f < signs.size(); ++f)
            if (signs[f] != signs[0]) return std::string("sign pattern differs between spectral families");
        return std::string();
    });

    return h.results;
}

}  // namespace dwg::validate
