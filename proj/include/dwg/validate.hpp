#pragma once

// Self-check suite: every library-level invariant runnable against a given
// configuration, reported per check. The fast subset keeps the expensive
// grids and long-time norm checks out.

#include <string>
#include <vector>

#include "dwg/backflow.hpp"
#include "dwg/kernels.hpp"
#include "dwg/oracle.hpp"
#include "dwg/wavepacket.hpp"

namespace dwg::validate {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;  // empty on success, first failure otherwise
};

struct Suite {
    kernels::KernelSpec spec;  // A0 as configured (normalized if it was 1)
    kernels::WaveguideGeometry geom;
    wavepacket::SpinState spin;
    oracle::QuadratureSettings quadrature;
    bool fast = false;
};

std::vector<CheckResult> run_validation(const Suite& suite);

}  // namespace dwg::validate
