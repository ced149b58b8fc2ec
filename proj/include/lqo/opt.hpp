// SPDX-License-Identifier: MIT
//
// First-order optimality machinery for H2 reduction of systems with
// quadratic outputs.  For a reduced candidate (A_r, B_r, C_r, M_kr) the
// squared error J = ||S - S_r||_{H2}^2 is differentiable in every reduced
// matrix, and the gradients are assembled from six matrix equations:
//
//   cross terms (n x r):   A X  + X A_r' + B B_r'                    = 0
//                          A' Z + Z A_r  - sum_k M_k X M_kr - C' C_r = 0
//                          A' Z1 + Z1 A_r - C' C_r                   = 0
//
//   reduced Gramians (r x r):
//                          A_r P_r + P_r A_r' + B_r B_r'                        = 0
//                          A_r' Q_r + Q_r A_r + sum_k M_kr P_r M_kr + C_r' C_r  = 0
//                          A_r' Q1_r + Q1_r A_r + C_r' C_r                      = 0
//
//   gradients:  dJ/dA_r  = 2 ((2 Q_r - Q1_r) P_r + (2 Z' - Z1') X)
//               dJ/dB_r  = 2 ((2 Q_r - Q1_r) B_r + (2 Z' - Z1') B)
//               dJ/dC_r  = 2 (C_r P_r - C X)
//               dJ/dM_kr = 2 (P_r M_kr P_r - X' M_k X)
//
// Stationary points admit the projector pair V = X P_r^{-1},
// W = -(2 Z - Z1)(2 Q_r - Q1_r)^{-1}, which satisfies W' V = I.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lqo/system.hpp"

namespace lqo {

// Solutions of the six coupling equations for a (fom, rom) pair.
struct CouplingSolutions {
  Eigen::MatrixXd x;   // n x r
  Eigen::MatrixXd z;   // n x r
  Eigen::MatrixXd z1;  // n x r
  Eigen::MatrixXd p_r;
  Eigen::MatrixXd q_r;
  Eigen::MatrixXd q1_r;
};

CouplingSolutions coupling_solutions(const LqoSystem& fom, const LqoSystem& rom);

struct GradientSet {
  Eigen::MatrixXd grad_a;
  Eigen::MatrixXd grad_b;
  Eigen::MatrixXd grad_c;
  std::vector<Eigen::MatrixXd> grad_m;
  double grad_a_norm = 0.0;
  double grad_b_norm = 0.0;
  double grad_c_norm = 0.0;
  double grad_m_norm = 0.0;  // sqrt of the summed squared Frobenius norms
};

GradientSet gradients(const LqoSystem& fom, const LqoSystem& rom,
                      const CouplingSolutions& coupling);

// Stationarity residuals (half the gradients) plus a scale-free summary.
struct FoncResiduals {
  Eigen::MatrixXd res_a;
  Eigen::MatrixXd res_b;
  Eigen::MatrixXd res_c;
  std::vector<Eigen::MatrixXd> res_m;
  double res_a_norm = 0.0;
  double res_b_norm = 0.0;
  double res_c_norm = 0.0;
  double res_m_norm = 0.0;
  // max over the four families of ||residual||_F / (family reference + eps)
  double combined_measure = 0.0;
};

FoncResiduals fonc_residuals(const LqoSystem& fom, const LqoSystem& rom);
FoncResiduals fonc_residuals(const LqoSystem& fom, const LqoSystem& rom,
                             const CouplingSolutions& coupling);

// The projector pair induced by the coupling solutions.  Throws
// IllConditionedError when P_r or 2 Q_r - Q1_r is numerically singular.
ProjectionPair optimal_projectors(const CouplingSolutions& coupling);

// Central-difference validation of the analytic gradients.
struct FdCheckFamily {
  double grad_norm = 0.0;
  double abs_dev = 0.0;  // Frobenius norm of (analytic - finite difference)
  double rel_dev = 0.0;
  int skipped = 0;  // entries whose perturbation left the stability region
};

struct FdCheckReport {
  FdCheckFamily a, b, c, m;
  double max_rel() const;
  int total_skipped() const;
};

FdCheckReport gradient_fd_check(const LqoSystem& fom, const LqoSystem& rom, double step);

}  // namespace lqo
