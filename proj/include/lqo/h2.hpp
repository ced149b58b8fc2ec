// SPDX-License-Identifier: MIT
//
// System Gramians, impulse-response kernels and the induced H2 inner
// product/norm, each computable by two independent routes (trace formulas on
// the Gramian side, adaptive quadrature on the kernel side).
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lqo/mateq.hpp"
#include "lqo/system.hpp"

namespace lqo {

struct GramianSet {
  Eigen::MatrixXd p_gram;               // A P + P A^T + B B^T = 0
  Eigen::MatrixXd q_gram;               // A^T Q + Q A + C^T C + sum M_k P M_k = 0
  Eigen::MatrixXd q1_gram;              // A^T Q1 + Q1 A + C^T C = 0
  std::vector<Eigen::MatrixXd> q2_parts;  // per-k parts, filled when requested
};

// Requires a stable system; q2_parts solve A^T Q + Q A + M_k P M_k = 0 and
// sum (with q1_gram) to q_gram.
GramianSet gramians(const LqoSystem& sys, bool with_parts = false);

// Impulse-response kernels evaluated via the matrix exponential:
//   h1(t)      = C e^{At} B                      (p x m)
//   h2(t1,t2)  row k = vec_rowwise(E(t1)^T M_k E(t2))   with E(t) = e^{At} B.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const LqoSystem& sys) : sys_(&sys) {}
  Eigen::MatrixXd h1(double t) const;
  Eigen::MatrixXd h2(double t1, double t2) const;  // p x m^2
  Eigen::MatrixXd state_response(double t) const;  // E(t) = e^{At} B

 private:
  const LqoSystem* sys_;
};

// trace(B^T Q B).
double h2_norm_sq(const LqoSystem& sys);
// trace(C P C^T) + sum_k trace(P M_k P M_k); equal to h2_norm_sq in exact
// arithmetic, kept separate as a cross-check route.
double h2_norm_sq_via_p(const LqoSystem& sys);

// -trace(B^T Z B_r), where X and Z solve
//   A X + X A_r^T + B B_r^T = 0,
//   A^T Z + Z A_r - sum_k M_k X M_kr - C^T C_r = 0.
double h2_inner_product(const LqoSystem& s, const LqoSystem& s_r);
// trace(C X C_r^T) + sum_k trace(X^T M_k X M_kr); the cross-check route.
double h2_inner_product_via_x(const LqoSystem& s, const LqoSystem& s_r);

// Squared H2 norm of the difference system, assembled from the trace form
// trace(B^T Q B + 2 B^T Z B_r + B_r^T Q_r B_r).
double h2_error_sq(const LqoSystem& fom, const LqoSystem& rom);
// Variant reusing a prefactored solver for A and a precomputed ||S||^2;
// avoids refactoring the full-order matrix inside tight loops.
double h2_error_sq(const LqoSystem& fom, const LqoSystem& rom, const SylvesterSolver& fom_solver,
                   double fom_h2_sq);

// Independent oracle: tensor-product Gauss-Legendre quadrature of
// ||h1||_F^2 + ||h2||_F^2 over a decay-derived horizon, panel-doubled until
// the combined value changes by less than rtol. Returns the squared norm.
double kernel_quadrature_h2(const LqoSystem& sys, double rtol);

// J * (u_l2^2 + u_kron_l2^2) with J = h2_error_sq(fom, rom); the arguments
// are the L2 norms (not squares) of u and of kron(u, u).
double linf_bound_rhs(const LqoSystem& fom, const LqoSystem& rom, double input_l2,
                      double input_kron_l2);

}  // namespace lqo
