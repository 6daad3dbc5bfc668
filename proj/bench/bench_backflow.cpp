// Timing comparison of the serial reference map against the OpenMP grid
// fill, for both evaluation modes.

#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dwg/backflow.hpp"
#include "dwg/wavepacket.hpp"

namespace {

double time_map(const dwg::kernels::KernelSpec& spec, const dwg::kernels::WaveguideGeometry& geom,
                const dwg::wavepacket::SpinState& spin, const dwg::backflow::DetectorPlane& plane,
                int n_rho, int n_phi, dwg::backflow::MapMode mode, bool parallel,
                double* checksum) {
    const auto start = std::chrono::steady_clock::now();
    const auto rep = dwg::backflow::backflow_map(spec, geom, spin, plane, n_rho, n_phi, mode, parallel);
    const auto stop = std::chrono::steady_clock::now();
    *checksum = rep.total_flux;
    return std::chrono::duration<double>(stop - start).count();
}

}  // namespace

int main() {
    const auto geom = dwg::kernels::WaveguideGeometry::with_radius(5.0);
    dwg::kernels::KernelSpec spec;
    spec.family = dwg::kernels::KernelFamily::K1Ratio;
    spec.tau0 = 1.0;
    spec.A0 = dwg::wavepacket::normalize(spec, geom);
    dwg::wavepacket::SpinState spin;
    spin.theta = 0.5 * 3.14159265358979323846;
    dwg::backflow::DetectorPlane plane;
    plane.L = 200.0;
    plane.t = 400.0;

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled\n");
#endif
    std::printf("%-12s %-10s %10s %12s %10s\n", "mode", "grid", "serial[s]", "parallel[s]", "speedup");

    struct Case {
        dwg::backflow::MapMode mode;
        const char* name;
        int n_rho, n_phi;
    };
    const Case cases[] = {
        {dwg::backflow::MapMode::Asymptotic, "asymptotic", 400, 512},
        {dwg::backflow::MapMode::Exact, "exact", 96, 128},
    };
    for (const auto& c : cases) {
        double cs_serial = 0.0, cs_parallel = 0.0;
        const double ts = time_map(spec, geom, spin, plane, c.n_rho, c.n_phi, c.mode, false, &cs_serial);
        const double tp = time_map(spec, geom, spin, plane, c.n_rho, c.n_phi, c.mode, true, &cs_parallel);
        char grid[32];
        std::snprintf(grid, sizeof(grid), "%dx%d", c.n_rho, c.n_phi);
        std::printf("%-12s %-10s %10.3f %12.3f %9.2fx", c.name, grid, ts, tp, ts / tp);
        std::printf(cs_serial == cs_parallel ? "  (results identical)\n" : "  (RESULTS DIFFER)\n");
    }
    return 0;
}
