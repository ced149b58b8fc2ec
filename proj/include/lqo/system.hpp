// SPDX-License-Identifier: MIT
//
// Linear systems with quadratic outputs:
//
//   x'(t) = A x(t) + B u(t),   x(0) = 0,
//   y_k(t) = (C x(t))_k + x(t)^T M_k x(t),   k = 1..p,
//
// together with Petrov-Galerkin projection and error-system assembly.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace lqo {

// (M + M^T)/2. The quadratic form x^T M x is unchanged.
Eigen::MatrixXd symmetrize_quadratic(const Eigen::MatrixXd& m_raw);

// max Re lambda(A); negative means asymptotically stable.
double spectral_abscissa(const Eigen::MatrixXd& a);

// Immutable state-space realization. The constructor checks dimension
// consistency and stores each M_k symmetrized, so downstream code may assume
// M_k = M_k^T.
class LqoSystem {
 public:
  LqoSystem(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c,
            std::vector<Eigen::MatrixXd> m_quad);

  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::MatrixXd& b() const { return b_; }
  const Eigen::MatrixXd& c() const { return c_; }
  const std::vector<Eigen::MatrixXd>& m_quad() const { return m_quad_; }
  const Eigen::MatrixXd& m_quad(Eigen::Index k) const { return m_quad_[static_cast<size_t>(k)]; }

  Eigen::Index n() const { return a_.rows(); }
  Eigen::Index m() const { return b_.cols(); }
  Eigen::Index p() const { return c_.rows(); }

 private:
  Eigen::MatrixXd a_, b_, c_;
  std::vector<Eigen::MatrixXd> m_quad_;
};

struct ValidationReport {
  std::vector<std::string> issues;           // empty when nothing is wrong
  double max_asymmetry = 0.0;                // max_k ||M_k - M_k^T||_F
  std::optional<double> spectral_abscissa;   // filled when stability was checked
  std::optional<bool> stable;
  bool ok() const { return issues.empty(); }
};

// Report-only checks: finiteness, residual asymmetry of the stored M_k and,
// on request, the spectral abscissa of A.
ValidationReport validate(const LqoSystem& sys, bool check_stability);

// p x n^2 matrix whose k-th row is M_k flattened row by row; for any x,
// kronecker_output(sys) * kron(x, x) equals the quadratic output part.
Eigen::MatrixXd kronecker_output(const LqoSystem& sys);

struct ProjectionPair {
  Eigen::MatrixXd v;  // right basis, n x r
  Eigen::MatrixXd w;  // left basis, n x r
};

// Petrov-Galerkin reduction:
//   A_r = (W^T V)^{-1} W^T A V,  B_r = (W^T V)^{-1} W^T B,
//   C_r = C V,                   M_kr = V^T M_k V (re-symmetrized).
// Throws IllConditionedError when cond(W^T V) exceeds 1e12.
LqoSystem project(const LqoSystem& sys, const ProjectionPair& proj);

// Order n+r realization of the difference of the two output maps:
//   A_e = blkdiag(A, A_r), B_e = [B; B_r], C_e = [C, -C_r],
//   M_ke = blkdiag(M_k, -M_kr).
LqoSystem assemble_error_system(const LqoSystem& fom, const LqoSystem& rom);

}  // namespace lqo
