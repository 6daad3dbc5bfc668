// Command-line front end: normalize, field, current, backflow, validate.
// Configuration comes from a JSON file; flags override file values. All
// physics values are in code units (Compton length = 1, c = 1); --si-scale
// via the output section multiplies length columns for display only.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dwg/backflow.hpp"
#include "dwg/kernels.hpp"
#include "dwg/oracle.hpp"
#include "dwg/specfun.hpp"
#include "dwg/validate.hpp"
#include "dwg/wavepacket.hpp"

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
constexpr double kComptonMeters = 3.8616e-13;  // display scale for --si output

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double a = 5.0;
    double theta = 0.5 * kPi;
    double phi_spin = 0.0;
    int family = 1;
    double tau0 = 1.0;
    double z0 = 1.5;
    std::optional<double> A0;
    double L = 200.0;
    std::optional<double> t;
    std::vector<double> t_list;
    int n_rho = 200;
    int n_phi = 256;
    int n_z = 32;
    std::optional<double> z_max;
    dwg::oracle::QuadratureSettings quadrature;
    std::string out_path = "dwg_out.csv";
    std::string format = "csv";
    bool si_scale = false;
};

void reject_unknown(const json& obj, const std::string& section, const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in section '" + section + "'");
    }
}

double require_number(const json& obj, const std::string& section, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(section + "." + key + " must be a number");
    return obj[key].get<double>();
}

int require_int(const json& obj, const std::string& section, const std::string& key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) throw ConfigError(section + "." + key + " must be an integer");
    return obj[key].get<int>();
}

RunConfig parse_config(const json& root_in) {
    json root = root_in;
    if (root.contains("config")) root = root["config"];  // accept emitted summaries
    reject_unknown(root, "top level",
                   {"geometry", "spin", "kernel", "plane", "grid", "quadrature", "output"});
    RunConfig c;
    if (root.contains("geometry")) {
        const auto& g = root["geometry"];
        reject_unknown(g, "geometry", {"a"});
        c.a = require_number(g, "geometry", "a", c.a);
        if (!(c.a > 0.0)) throw ConfigError("geometry.a must be positive");
    }
    if (root.contains("spin")) {
        const auto& s = root["spin"];
        reject_unknown(s, "spin", {"theta", "phi_spin"});
        c.theta = require_number(s, "spin", "theta", c.theta);
        c.phi_spin = require_number(s, "spin", "phi_spin", c.phi_spin);
        if (!(c.theta >= 0.0 && c.theta <= kPi)) throw ConfigError("spin.theta must lie in [0, pi]");
        if (!(c.phi_spin >= 0.0 && c.phi_spin < 2.0 * kPi))
            throw ConfigError("spin.phi_spin must lie in [0, 2 pi)");
    }
    if (root.contains("kernel")) {
        const auto& k = root["kernel"];
        reject_unknown(k, "kernel", {"family", "tau0", "z0", "A0"});
        c.family = require_int(k, "kernel", "family", c.family);
        c.tau0 = require_number(k, "kernel", "tau0", c.tau0);
        c.z0 = require_number(k, "kernel", "z0", c.z0);
        if (k.contains("A0")) c.A0 = require_number(k, "kernel", "A0", 0.0);
        if (c.family < 1 || c.family > 4) throw ConfigError("kernel.family must be 1, 2, 3 or 4");
        if (!(c.tau0 > 0.0)) throw ConfigError("kernel.tau0 must be positive");
        if (c.family >= 2 && !(c.z0 >= 0.0)) throw ConfigError("kernel.z0 must be non-negative");
        if (c.family == 4 && !(c.z0 > 0.0)) throw ConfigError("kernel.z0 must be positive for family 4");
    }
    if (root.contains("plane")) {
        const auto& p = root["plane"];
        reject_unknown(p, "plane", {"L", "t", "t_list"});
        c.L = require_number(p, "plane", "L", c.L);
        if (p.contains("t")) c.t = require_number(p, "plane", "t", 0.0);
        if (p.contains("t_list")) {
            if (!p["t_list"].is_array()) throw ConfigError("plane.t_list must be an array");
            for (const auto& v : p["t_list"]) {
                if (!v.is_number()) throw ConfigError("plane.t_list entries must be numbers");
                c.t_list.push_back(v.get<double>());
            }
        }
        if (!(c.L > 0.0)) throw ConfigError("plane.L must be positive");
    }
    if (root.contains("grid")) {
        const auto& g = root["grid"];
        reject_unknown(g, "grid", {"n_rho", "n_phi", "n_z", "z_max"});
        c.n_rho = require_int(g, "grid", "n_rho", c.n_rho);
        c.n_phi = require_int(g, "grid", "n_phi", c.n_phi);
        c.n_z = require_int(g, "grid", "n_z", c.n_z);
        if (g.contains("z_max")) c.z_max = require_number(g, "grid", "z_max", 0.0);
        if (c.n_rho < 1 || c.n_phi < 1 || c.n_z < 1)
            throw ConfigError("grid.n_rho, grid.n_phi and grid.n_z must be >= 1");
        if (c.z_max && !(*c.z_max > 0.0)) throw ConfigError("grid.z_max must be positive");
    }
    if (root.contains("quadrature")) {
        const auto& q = root["quadrature"];
        reject_unknown(q, "quadrature", {"rel_tol", "abs_tol", "max_subdivisions", "k_max"});
        c.quadrature.rel_tol = require_number(q, "quadrature", "rel_tol", c.quadrature.rel_tol);
        c.quadrature.abs_tol = require_number(q, "quadrature", "abs_tol", c.quadrature.abs_tol);
        c.quadrature.max_subdivisions =
            require_int(q, "quadrature", "max_subdivisions", c.quadrature.max_subdivisions);
        c.quadrature.k_max = require_number(q, "quadrature", "k_max", c.quadrature.k_max);
        try {
            c.quadrature.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("quadrature: ") + e.what());
        }
    }
    if (root.contains("output")) {
        const auto& o = root["output"];
        reject_unknown(o, "output", {"path", "format", "si_scale"});
        if (o.contains("path")) {
            if (!o["path"].is_string()) throw ConfigError("output.path must be a string");
            c.out_path = o["path"].get<std::string>();
        }
        if (o.contains("format")) {
            if (!o["format"].is_string()) throw ConfigError("output.format must be a string");
            c.format = o["format"].get<std::string>();
        }
        if (o.contains("si_scale")) {
            if (!o["si_scale"].is_boolean()) throw ConfigError("output.si_scale must be a boolean");
            c.si_scale = o["si_scale"].get<bool>();
        }
        if (c.format != "csv") throw ConfigError("output.format: only 'csv' is supported");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    if (path.empty()) return RunConfig{};
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json root;
    try {
        in >> root;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(root);
}

json resolved_config_json(const RunConfig& c) {
    json root;
    root["geometry"] = {{"a", c.a}};
    root["spin"] = {{"theta", c.theta}, {"phi_spin", c.phi_spin}};
    json kern = {{"family", c.family}, {"tau0", c.tau0}, {"z0", c.z0}};
    if (c.A0) kern["A0"] = *c.A0;
    root["kernel"] = kern;
    json plane = {{"L", c.L}};
    if (c.t) plane["t"] = *c.t;
    if (!c.t_list.empty()) plane["t_list"] = c.t_list;
    root["plane"] = plane;
    json grid = {{"n_rho", c.n_rho}, {"n_phi", c.n_phi}, {"n_z", c.n_z}};
    if (c.z_max) grid["z_max"] = *c.z_max;
    root["grid"] = grid;
    root["quadrature"] = {{"rel_tol", c.quadrature.rel_tol},
                          {"abs_tol", c.quadrature.abs_tol},
                          {"max_subdivisions", c.quadrature.max_subdivisions},
                          {"k_max", c.quadrature.k_max}};
    root["output"] = {{"path", c.out_path}, {"format", c.format}, {"si_scale", c.si_scale}};
    return root;
}

struct Physics {
    dwg::kernels::KernelSpec spec;
    dwg::kernels::WaveguideGeometry geom;
    dwg::wavepacket::SpinState spin;
};

Physics build_physics(const RunConfig& c, bool normalized) {
    Physics p;
    p.geom = dwg::kernels::WaveguideGeometry::with_radius(c.a);
    p.spec.family = static_cast<dwg::kernels::KernelFamily>(c.family);
    p.spec.tau0 = c.tau0;
    p.spec.z0 = c.z0;
    p.spec.validate();
    p.spin.theta = c.theta;
    p.spin.phi_spin = c.phi_spin;
    p.spin.validate();
    if (c.A0) {
        p.spec.A0 = {*c.A0, 0.0};
    } else if (normalized) {
        p.spec.A0 = dwg::wavepacket::normalize(p.spec, p.geom, c.quadrature);
    }
    return p;
}

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double effective_t(const RunConfig& c, std::vector<std::string>* warnings) {
    if (c.t) return *c.t;
    if (!c.t_list.empty()) {
        if (c.t_list.size() > 1 && warnings)
            warnings->push_back("map computed at the first entry of plane.t_list; remaining entries ignored");
        return c.t_list.front();
    }
    throw ConfigError("plane.t (or plane.t_list) is required for this command");
}

int cmd_normalize(const RunConfig& cfg) {
    Physics p = build_physics(cfg, false);
    const dwg::cplx a0 = dwg::wavepacket::normalize(p.spec, p.geom, cfg.quadrature);
    p.spec.A0 = a0;
    const double ks = dwg::oracle::norm_kspace(p.spec, p.geom, cfg.quadrature).value;
    const double zs = dwg::oracle::norm_zspace(p.spec, p.geom, cfg.quadrature).value;
    const double delta = std::fabs(zs / (kPi * ks) - 1.0);
    std::printf("A0=%.17g delta=%.17g\n", a0.real(), delta);
    return 0;
}

// shared rho/phi/z grid for the field and current samplers; endpoints
// included so the boundary rows are present in the output
struct FieldGrid {
    std::vector<double> rho, phi, z;
};

FieldGrid make_grid(const RunConfig& cfg, double t) {
    FieldGrid g;
    const double zmax = cfg.z_max ? *cfg.z_max : t + 10.0;
    for (int i = 0; i < cfg.n_rho; ++i)
        g.rho.push_back(cfg.n_rho == 1 ? 0.0 : cfg.a * i / (cfg.n_rho - 1));
    for (int j = 0; j < cfg.n_phi; ++j) g.phi.push_back(2.0 * kPi * j / cfg.n_phi);
    for (int k = 0; k < cfg.n_z; ++k)
        g.z.push_back(cfg.n_z == 1 ? 0.0 : zmax * k / (cfg.n_z - 1));
    return g;
}

int cmd_field(const RunConfig& cfg) {
    std::vector<std::string> warn;
    const double t = effective_t(cfg, &warn);
    Physics p = build_physics(cfg, true);
    const FieldGrid g = make_grid(cfg, t);
    const double lscale = cfg.si_scale ? kComptonMeters : 1.0;

    const long total = static_cast<long>(g.rho.size()) * g.phi.size() * g.z.size();
    std::vector<dwg::wavepacket::Bispinor> rows(total);
#pragma omp parallel for schedule(static)
    for (long idx = 0; idx < total; ++idx) {
        const long nz = g.z.size(), nphi = g.phi.size();
        const long k = idx % nz, j = (idx / nz) % nphi, i = idx / (nz * nphi);
        dwg::wavepacket::CylPoint pt{g.rho[i], g.phi[j], g.z[k]};
        rows[idx] = dwg::wavepacket::evaluate_bispinor(p.spec, p.geom, p.spin, pt, t);
    }

    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
    out << "rho,phi,z,t,re_c1,im_c1,re_c2,im_c2,re_c3,im_c3,re_c4,im_c4,density\n";
    long idx = 0;
    for (size_t i = 0; i < g.rho.size(); ++i)
        for (size_t j = 0; j < g.phi.size(); ++j)
            for (size_t k = 0; k < g.z.size(); ++k, ++idx) {
                const auto& b = rows[idx];
                out << num17(g.rho[i] * lscale) << ',' << num17(g.phi[j]) << ','
                    << num17(g.z[k] * lscale) << ',' << num17(t * lscale) << ','
                    << num17(b.c1.real()) << ',' << num17(b.c1.imag()) << ','
                    << num17(b.c2.real()) << ',' << num17(b.c2.imag()) << ','
                    << num17(b.c3.real()) << ',' << num17(b.c3.imag()) << ','
                    << num17(b.c4.real()) << ',' << num17(b.c4.imag()) << ','
                    << num17(b.density()) << '\n';
            }
    return 0;
}

int cmd_current(const RunConfig& cfg) {
    std::vector<std::string> warn;
    const double t = effective_t(cfg, &warn);
    Physics p = build_physics(cfg, true);
    const FieldGrid g = make_grid(cfg, t);
    const double lscale = cfg.si_scale ? kComptonMeters : 1.0;

    const long total = static_cast<long>(g.rho.size()) * g.phi.size() * g.z.size();
    std::vector<dwg::wavepacket::CurrentSample> rows(total);
#pragma omp parallel for schedule(static)
    for (long idx = 0; idx < total; ++idx) {
        const long nz = g.z.size(), nphi = g.phi.size();
        const long k = idx % nz, j = (idx / nz) % nphi, i = idx / (nz * nphi);
        dwg::wavepacket::CylPoint pt{g.rho[i], g.phi[j], g.z[k]};
        const auto psi = dwg::wavepacket::evaluate_bispinor(p.spec, p.geom, p.spin, pt, t);
        rows[idx] = dwg::wavepacket::density_and_current(psi, pt.phi);
    }

    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
    out << "rho,phi,z,t,density,j_rho,j_phi,j_z\n";
    long idx = 0;
    for (size_t i = 0; i < g.rho.size(); ++i)
        for (size_t j = 0; j < g.phi.size(); ++j)
            for (size_t k = 0; k < g.z.size(); ++k, ++idx) {
                const auto& s = rows[idx];
                out << num17(g.rho[i] * lscale) << ',' << num17(g.phi[j]) << ','
                    << num17(g.z[k] * lscale) << ',' << num17(t * lscale) << ','
                    << num17(s.density) << ',' << num17(s.j_rho) << ',' << num17(s.j_phi) << ','
                    << num17(s.j_z) << '\n';
            }
    return 0;
}

int cmd_backflow(const RunConfig& cfg, const std::string& mode) {
    std::vector<std::string> warnings;
    const double t = effective_t(cfg, &warnings);
    Physics p = build_physics(cfg, true);
    dwg::backflow::DetectorPlane plane;
    plane.L = cfg.L;
    plane.t = t;
    plane.validate();

    const bool want_exact = mode == "exact" || mode == "both";
    const bool want_asym = mode == "asymptotic" || mode == "both";
    std::optional<dwg::backflow::BackflowReport> exact, asym;
    if (want_exact)
        exact = dwg::backflow::backflow_map(p.spec, p.geom, p.spin, plane, cfg.n_rho, cfg.n_phi,
                                            dwg::backflow::MapMode::Exact);
    if (want_asym)
        asym = dwg::backflow::backflow_map(p.spec, p.geom, p.spin, plane, cfg.n_rho, cfg.n_phi,
                                           dwg::backflow::MapMode::Asymptotic);

    const double lscale = cfg.si_scale ? kComptonMeters : 1.0;
    std::ofstream out(cfg.out_path);
    if (!out) throw std::runtime_error("cannot open output file '" + cfg.out_path + "'");
    out << "rho,phi,jz_exact,jz_asymptotic,sufficient_flag\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < cfg.n_rho; ++i)
        for (int j = 0; j < cfg.n_phi; ++j) {
            const double rho = (i + 0.5) * cfg.a / cfg.n_rho;
            const double phi = (j + 0.5) * 2.0 * kPi / cfg.n_phi;
            const size_t idx = static_cast<size_t>(i) * cfg.n_phi + j;
            const bool suff = dwg::backflow::backflow_sufficient(p.geom, p.spin, rho, phi, plane);
            out << num17(rho * lscale) << ',' << num17(phi) << ','
                << num17(exact ? exact->jz[idx] : nan) << ','
                << num17(asym ? asym->jz[idx] : nan) << ',' << (suff ? 1 : 0) << '\n';
        }
    out.close();

    const auto& rep = exact ? *exact : *asym;
    for (const auto& w : rep.warnings) warnings.push_back(w);
    json summary;
    summary["config"] = resolved_config_json(cfg);
    summary["mode"] = mode;
    summary["area_fraction"] = rep.area_fraction;
    summary["min_jz"] = rep.min_jz;
    summary["backflow_flux"] = rep.backflow_flux;
    summary["total_flux"] = rep.total_flux;
    summary["warnings"] = warnings;
    std::ofstream js(cfg.out_path + ".summary.json");
    if (!js) throw std::runtime_error("cannot open summary file");
    js << summary.dump(2) << '\n';
    return 0;
}

int cmd_validate(const RunConfig& cfg, bool fast) {
    Physics p = build_physics(cfg, true);
    dwg::validate::Suite suite;
    suite.spec = p.spec;
    suite.geom = p.geom;
    suite.spin = p.spin;
    suite.quadrature = cfg.quadrature;
    suite.fast = fast;
    const auto results = dwg::validate::run_validation(suite);
    std::string first_fail;
    for (const auto& r : results) {
        if (r.passed) {
            std::printf("PASS %s\n", r.name.c_str());
        } else {
            std::printf("FAIL %s: %s\n", r.name.c_str(), r.detail.c_str());
            if (first_fail.empty()) first_fail = r.name;
        }
    }
    if (!first_fail.empty()) {
        std::printf("FAILED: %s\n", first_fail.c_str());
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relativistic waveguide wave packets: closed-form fields, currents and backflow maps"};
    app.require_subcommand(1);

    std::string config_path, out_override, mode = "both";
    bool fast = false;
    app.add_option("--config", config_path, "JSON run configuration")->capture_default_str();
    app.add_option("--out", out_override, "output path override");
    app.add_option("--mode", mode, "backflow evaluation mode")
        ->check(CLI::IsMember({"exact", "asymptotic", "both"}));
    app.add_flag("--fast", fast, "reduced validation subset");

    auto* sub_norm = app.add_subcommand("normalize", "print the normalization constant and duality delta");
    auto* sub_field = app.add_subcommand("field", "sample the four-component field on a grid");
    auto* sub_curr = app.add_subcommand("current", "sample density and current on a grid");
    auto* sub_back = app.add_subcommand("backflow", "axial-current cross-section map and summary");
    auto* sub_val = app.add_subcommand("validate", "run the invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (!out_override.empty()) cfg.out_path = out_override;
        if (sub_norm->parsed()) return cmd_normalize(cfg);
        if (sub_field->parsed()) return cmd_field(cfg);
        if (sub_curr->parsed()) return cmd_current(cfg);
        if (sub_back->parsed()) return cmd_backflow(cfg, mode);
        if (sub_val->parsed()) return cmd_validate(cfg, fast);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const dwg::QuadratureError& e) {
        std::fprintf(stderr, "quadrature failure: %s (best estimate %.17g + %.17gi, bound %.3g)\n",
                     e.what(), e.best_estimate.real(), e.best_estimate.imag(), e.error_bound);
        return 1;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
