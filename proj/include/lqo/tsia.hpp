// SPDX-License-Identifier: MIT
//
// Two-sided iteration for H2-optimal reduction of systems with quadratic
// outputs.  Each sweep solves the two coupling equations
//
//   A X + X A_r' + B B_r' = 0
//   A' Zh + Zh A_r - 2 sum_k M_k X M_kr - C' C_r = 0
//
// takes V = orth(X), W = orth(Zh), and replaces the reduced model by the
// oblique projection with (W'V)^{-1}.  Fixed points satisfy the first-order
// optimality conditions of ||S - S_r||_{H2}^2.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lqo/system.hpp"

namespace lqo {

enum class TsiaMonitor {
  relative_eta,  // normalized change of eta = ||S - S_r||^2 / ||S||^2
  tail_tau,      // normalized change of tau = ||S - S_r||^2 - ||S||^2
  both,
};

struct TsiaConfig {
  Eigen::Index r = 1;
  double tol = 1e-10;
  int max_iters = 500;
  TsiaMonitor monitor = TsiaMonitor::relative_eta;
  std::optional<LqoSystem> init;  // defaults to default_init(...)
  bool compute_fom_norm = true;   // required by the relative_eta monitor
  bool track_fonc = false;        // record the stationarity measure per sweep
  std::optional<double> converge_on_absolute_eta;  // stop once eta <= this
};

struct IterationRecord {
  int iter = 0;
  std::optional<double> eta;
  std::optional<double> tau;
  std::optional<double> delta_eta;  // normalized change against the previous stable sweep
  std::optional<double> delta_tau;
  bool rom_stable = false;
  std::optional<double> fonc_measure;
  double seconds = 0.0;
};

enum class TsiaStopReason {
  converged,
  max_iters,
  solver_failure,
};

struct TsiaRun {
  LqoSystem rom;
  ProjectionPair projectors;
  std::vector<IterationRecord> history;
  bool converged = false;
  TsiaStopReason reason = TsiaStopReason::max_iters;
  std::optional<double> fom_h2_sq;
  std::string failure_detail;
};

// Diagonal seed model: poles spread log-uniformly in [-10^4, -1], identity
// slices for the input, linear output, and quadratic output maps.
LqoSystem default_init(Eigen::Index n, Eigen::Index m, Eigen::Index p, Eigen::Index r);

// One projection sweep starting from `rom`; throws on solver breakdown.
LqoSystem tsia_step(const LqoSystem& fom, const LqoSystem& rom);

TsiaRun tsia(const LqoSystem& fom, const TsiaConfig& config);

// Squared relative H2 error of the pair, computed from the Gramian traces.
// Returns nullopt when the reduced model is unstable.
std::optional<double> relative_h2_error_sq(const LqoSystem& fom, const LqoSystem& rom,
                                           double fom_h2_sq);

// tau = ||S_r||^2 - 2 <S, S_r>, the part of the squared error that depends
// on the reduced model; eta = (||S||^2 + tau) / ||S||^2.
std::optional<double> error_tail_term(const LqoSystem& fom, const LqoSystem& rom);

}  // namespace lqo
