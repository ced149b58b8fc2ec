// SPDX-License-Identifier: MIT
//
// Dense Lyapunov/Sylvester solvers (Bartels-Stewart family) with residual
// certification. Two sign conventions cover every equation in the toolkit:
//
//   forward:  A X + X A_r^T + F = 0
//   adjoint:  A^T X + X A_r + F = 0
#pragma once

#include <Eigen/Dense>

#include "lqo/system.hpp"

namespace lqo {

enum class SylvesterKind { forward, adjoint };

struct SolveCertificate {
  double residual_fro = 0.0;
  // residual_fro / (||A||_F ||X||_F + ||X||_F ||A_r||_F + ||F||_F)
  double relative_residual = 0.0;
};

struct CertifiedSolution {
  Eigen::MatrixXd x;
  SolveCertificate cert;
};

struct SylvesterProblem {
  Eigen::MatrixXd a_left;   // n x n
  Eigen::MatrixXd a_right;  // r x r
  Eigen::MatrixXd rhs;      // n x r constant term F
  SylvesterKind kind = SylvesterKind::forward;
};

// Real Schur form of A computed once; the factorization of A^T is derived
// from it by a reversal-permutation flip, so both solve orientations share
// the O(n^3) work. Each subsequent solve against the same A costs O(n^2 r)
// plus a Schur decomposition of the (small) right coefficient.
class SylvesterSolver {
 public:
  explicit SylvesterSolver(Eigen::MatrixXd a);

  // Solves the equation selected by `kind` with this A on the left.
  // Throws SpectralOverlapError when lambda(A) meets lambda(-A_r) and
  // ResidualCertificateError when the certificate exceeds 1e-8.
  CertifiedSolution solve(const Eigen::MatrixXd& a_right, const Eigen::MatrixXd& rhs,
                          SylvesterKind kind) const;

  double spectral_abscissa() const { return abscissa_; }
  const Eigen::MatrixXd& a() const { return a_; }

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd u_, t_;    // A   = U  T  U^T
  Eigen::MatrixXd uf_, tf_;  // A^T = Uf Tf Uf^T
  double abscissa_ = 0.0;
};

// One-shot convenience wrapper around SylvesterSolver.
CertifiedSolution solve_sylvester(const SylvesterProblem& problem);

// A P + P A^T + B B^T = 0; requires A stable; result symmetrized.
CertifiedSolution solve_lyapunov_reach(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
CertifiedSolution solve_lyapunov_reach(const SylvesterSolver& solver, const Eigen::MatrixXd& b);

// A^T X + X A + W = 0 for symmetric W; requires A stable; result symmetrized.
CertifiedSolution solve_lyapunov_obsv(const Eigen::MatrixXd& a, const Eigen::MatrixXd& w_sym);
CertifiedSolution solve_lyapunov_obsv(const SylvesterSolver& solver, const Eigen::MatrixXd& w_sym);

// A^T Q + Q A + C^T C + sum_k M_k P M_k = 0 with P the reachability Gramian.
CertifiedSolution solve_lyapunov_qo_obsv(const LqoSystem& sys, const Eigen::MatrixXd& p_gram);

}  // namespace lqo
