// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>

#include "lqo/system.hpp"

namespace lqo {

// 1D advection-diffusion on (0, 1) with a Dirichlet control at the left
// boundary and a flux control at the right one, discretized by finite
// differences on n interior cells (central diffusion, upwind advection).
// The quadratic output measures the deviation of the state from 1:
//   cost(t) = (h/2) ||v(t) - 1||^2 = y(t) + cost_offset.
struct AdvectionDiffusionConfig {
  Eigen::Index n = 300;
  double alpha = 0.01;  // diffusion coefficient
  double beta = 1.0;    // advection speed
};

struct AdvectionDiffusionModel {
  LqoSystem system;
  double cost_offset = 0.0;
};

AdvectionDiffusionModel build_advection_diffusion(const AdvectionDiffusionConfig& config);

// Dense random system with spectral abscissa -gap; entries are Gaussian and
// the quadratic maps are symmetrized.  Deterministic in the seed.
LqoSystem random_stable_lqo(Eigen::Index n, Eigen::Index m, Eigen::Index p, std::uint64_t seed,
                            double gap = 0.5);

}  // namespace lqo
