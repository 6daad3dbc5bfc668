#pragma once

// Axial-current diagnostics on a detector cross-section: the stationary-phase
// form of j_z, the sufficiency inequality for negative current, full-plane
// maps in either exact (closed-form kernels) or asymptotic mode, and time
// scans. Map cells are midpoint samples weighted by rho drho dphi; the grid
// fill runs in parallel, reductions stay serial so results are independent
// of thread count.

#include <cstdint>
#include <string>
#include <vector>

#include "dwg/kernels.hpp"
#include "dwg/types.hpp"
#include "dwg/wavepacket.hpp"

namespace dwg::backflow {

struct DetectorPlane {
    double L = 100.0;  // axial position of the cross-section
    double t = 250.0;  // detection time, must satisfy t > L (c = 1)

    void validate() const;
};

enum class MapMode { Exact, Asymptotic };

struct BackflowReport {
    int n_rho = 0;
    int n_phi = 0;
    std::vector<double> jz;        // cell values, index i_rho * n_phi + i_phi
    std::vector<std::uint8_t> mask;  // jz < 0
    double area_fraction = 0.0;    // backflow area over cross-section area
    double min_jz = 0.0;
    double backflow_flux = 0.0;    // integral of min(jz, 0), always <= 0
    double total_flux = 0.0;
    std::vector<std::string> warnings;
};

/// stationary-phase wavenumber selected at (L, t); domain error when t <= L
double k_parallel(const kernels::WaveguideGeometry& geom, double L, double t);

/// large-distance form of the axial current at cross-section point (rho, phi)
double asymptotic_jz(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                     const wavepacket::SpinState& spin, double rho, double phi,
                     const DetectorPlane& plane);

/// strict sufficiency inequality for a negative asymptotic current
bool backflow_sufficient(const kernels::WaveguideGeometry& geom, const wavepacket::SpinState& spin,
                         double rho, double phi, const DetectorPlane& plane);

BackflowReport backflow_map(const kernels::KernelSpec& spec, const kernels::WaveguideGeometry& geom,
                            const wavepacket::SpinState& spin, const DetectorPlane& plane,
                            int n_rho, int n_phi, MapMode mode, bool parallel = true);

std::vector<BackflowReport> persistence_scan(const kernels::KernelSpec& spec,
                                             const kernels::WaveguideGeometry& geom,
                                             const wavepacket::SpinState& spin, double L,
                                             const std::vector<double>& t_list, MapMode mode,
                                             int n_rho, int n_phi);

}  // namespace dwg::backflow
