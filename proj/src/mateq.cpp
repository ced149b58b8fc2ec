// SPDX-License-Identifier: MIT
#include "lqo/mateq.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>
#include <vector>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

struct SchurPair {
  Eigen::MatrixXd u, t;
};

SchurPair schur_of(const Eigen::MatrixXd& a) {
  Eigen::RealSchur<Eigen::MatrixXd> dec(a);
  if (dec.info() != Eigen::Success)
    throw std::runtime_error("mateq: real Schur iteration did not converge");
  return {dec.matrixU(), dec.matrixT()};
}

// A = U T U^T  =>  A^T = (UJ)(J T^T J)(UJ)^T with J the reversal permutation;
// J T^T J is again upper quasi-triangular.
SchurPair flipped(const SchurPair& s) {
  return {s.u.rowwise().reverse(), s.t.transpose().reverse().eval()};
}

double abscissa_from_schur(const Eigen::MatrixXd& t) {
  const Eigen::Index n = t.rows();
  double worst = -std::numeric_limits<double>::infinity();
  Eigen::Index i = 0;
  while (i < n) {
    if (i + 1 < n && t(i + 1, i) != 0.0) {
      worst = std::max(worst, 0.5 * (t(i, i) + t(i + 1, i + 1)));
      i += 2;
    } else {
      worst = std::max(worst, t(i, i));
      i += 1;
    }
  }
  return worst;
}

// Index boundaries of the 1x1/2x2 diagonal blocks, with a trailing sentinel.
std::vector<Eigen::Index> block_starts(const Eigen::MatrixXd& t) {
  std::vector<Eigen::Index> starts;
  const Eigen::Index n = t.rows();
  Eigen::Index i = 0;
  while (i < n) {
    starts.push_back(i);
    i += (i + 1 < n && t(i + 1, i) != 0.0) ? 2 : 1;
  }
  starts.push_back(n);
  return starts;
}

// T_l Y + Y T_r + G = 0 with both coefficients upper quasi-triangular.
// Column-block sweep left to right; within a column block, row blocks are
// eliminated bottom-up. Each pivot system is at most 4x4.
Eigen::MatrixXd solve_quasi_triangular(const Eigen::MatrixXd& tl, const Eigen::MatrixXd& tr,
                                       Eigen::MatrixXd g, double overlap_tol) {
  const Eigen::Index n = tl.rows(), r = tr.rows();
  const auto row_blocks = block_starts(tl);
  const auto col_blocks = block_starts(tr);
  Eigen::MatrixXd y(n, r);

  for (size_t jb = 0; jb + 1 < col_blocks.size(); ++jb) {
    const Eigen::Index j0 = col_blocks[jb], jw = col_blocks[jb + 1] - j0;
    const Eigen::MatrixXd d = tr.block(j0, j0, jw, jw);

    for (size_t ib = row_blocks.size() - 1; ib-- > 0;) {
      const Eigen::Index i0 = row_blocks[ib], iv = row_blocks[ib + 1] - i0;
      const Eigen::MatrixXd tll = tl.block(i0, i0, iv, iv);

      // (I_jw kron T_ll + D^T kron I_iv) vec(Y_ij) = -vec(G_ij)
      Eigen::MatrixXd k = Eigen::MatrixXd::Zero(iv * jw, iv * jw);
      for (Eigen::Index q = 0; q < jw; ++q) {
        k.block(q * iv, q * iv, iv, iv) += tll;
        for (Eigen::Index s = 0; s < jw; ++s)
          k.block(q * iv, s * iv, iv, iv).diagonal().array() += d(s, q);
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
      if (svd.singularValues()(iv * jw - 1) <= overlap_tol)
        throw SpectralOverlapError(
            "sylvester: spectra of the coefficient matrices overlap (singular pivot block)");

      Eigen::MatrixXd gij = g.block(i0, j0, iv, jw);
      Eigen::VectorXd rhs = -Eigen::Map<Eigen::VectorXd>(gij.data(), iv * jw);
      Eigen::VectorXd sol = svd.solve(rhs);
      y.block(i0, j0, iv, jw) = Eigen::Map<Eigen::MatrixXd>(sol.data(), iv, jw);

      // Fold the solved block into the rows above it.
      if (i0 > 0)
        g.block(0, j0, i0, jw).noalias() += tl.block(0, i0, i0, iv) * y.block(i0, j0, iv, jw);
    }
    // Fold the solved column block into the columns to its right.
    const Eigen::Index rest = r - j0 - jw;
    if (rest > 0)
      g.block(0, j0 + jw, n, rest).noalias() +=
          y.block(0, j0, n, jw) * tr.block(j0, j0 + jw, jw, rest);
  }
  return y;
}

SolveCertificate certify(const Eigen::MatrixXd& residual, const Eigen::MatrixXd& a_left,
                         const Eigen::MatrixXd& a_right, const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& f) {
  SolveCertificate cert;
  cert.residual_fro = residual.norm();
  const double scale = a_left.norm() * x.norm() + x.norm() * a_right.norm() + f.norm();
  cert.relative_residual = scale > 0.0 ? cert.residual_fro / scale : cert.residual_fro;
  return cert;
}

void enforce_certificate(const SolveCertificate& cert) {
  if (!(cert.relative_residual <= 1e-8))
    throw ResidualCertificateError("sylvester: relative residual " +
                                   std::to_string(cert.relative_residual) +
                                   " exceeds the 1e-8 certificate threshold");
}

}  // namespace

SylvesterSolver::SylvesterSolver(Eigen::MatrixXd a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() < 1)
    throw std::invalid_argument("SylvesterSolver: A must be square");
  auto dec = schur_of(a_);
  u_ = std::move(dec.u);
  t_ = std::move(dec.t);
  auto flip = flipped({u_, t_});
  uf_ = std::move(flip.u);
  tf_ = std::move(flip.t);
  abscissa_ = abscissa_from_schur(t_);
}

CertifiedSolution SylvesterSolver::solve(const Eigen::MatrixXd& a_right,
                                         const Eigen::MatrixXd& rhs, SylvesterKind kind) const {
  const Eigen::Index n = a_.rows(), r = a_right.rows();
  if (a_right.cols() != r || rhs.rows() != n || rhs.cols() != r)
    throw std::invalid_argument("sylvester: dimension mismatch between A, A_r and F");

  const SchurPair right_plain = schur_of(a_right);
  // forward uses A on the left and A_r^T on the right; adjoint uses A^T and A_r.
  const bool fwd = kind == SylvesterKind::forward;
  const Eigen::MatrixXd& ul = fwd ? u_ : uf_;
  const Eigen::MatrixXd& tl = fwd ? t_ : tf_;
  const SchurPair right = fwd ? flipped(right_plain) : right_plain;

  const double overlap_tol = 1e-14 * (a_.norm() + a_right.norm());
  Eigen::MatrixXd g = ul.transpose() * rhs * right.u;
  Eigen::MatrixXd y = solve_quasi_triangular(tl, right.t, std::move(g), overlap_tol);
  Eigen::MatrixXd x = ul * y * right.u.transpose();

  const Eigen::MatrixXd residual = fwd ? (a_ * x + x * a_right.transpose() + rhs).eval()
                                       : (a_.transpose() * x + x * a_right + rhs).eval();
  CertifiedSolution out{std::move(x), {}};
  out.cert = certify(residual, a_, a_right, out.x, rhs);
  enforce_certificate(out.cert);
  return out;
}

CertifiedSolution solve_sylvester(const SylvesterProblem& problem) {
  SylvesterSolver solver(problem.a_left);
  return solver.solve(problem.a_right, problem.rhs, problem.kind);
}

namespace {

CertifiedSolution lyapunov_via(const SylvesterSolver& solver, const Eigen::MatrixXd& f,
                               SylvesterKind kind) {
  if (solver.spectral_abscissa() >= 0.0)
    throw UnstableSystemError("lyapunov: coefficient matrix is not asymptotically stable");
  CertifiedSolution sol = solver.solve(solver.a(), f, kind);
  sol.x = 0.5 * (sol.x + sol.x.transpose()).eval();
  const Eigen::MatrixXd residual =
      kind == SylvesterKind::forward
          ? (solver.a() * sol.x + sol.x * solver.a().transpose() + f).eval()
          : (solver.a().transpose() * sol.x + sol.x * solver.a() + f).eval();
  sol.cert = certify(residual, solver.a(), solver.a(), sol.x, f);
  enforce_certificate(sol.cert);
  return sol;
}

}  // namespace

CertifiedSolution solve_lyapunov_reach(const SylvesterSolver& solver, const Eigen::MatrixXd& b) {
  if (b.rows() != solver.a().rows())
    throw std::invalid_argument("lyapunov: B must have as many rows as A");
  return lyapunov_via(solver, b * b.transpose(), SylvesterKind::forward);
}

CertifiedSolution solve_lyapunov_reach(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return solve_lyapunov_reach(SylvesterSolver(a), b);
}

CertifiedSolution solve_lyapunov_obsv(const SylvesterSolver& solver, const Eigen::MatrixXd& w_sym) {
  if (w_sym.rows() != solver.a().rows() || w_sym.cols() != solver.a().rows())
    throw std::invalid_argument("lyapunov: weight must be n x n");
  return lyapunov_via(solver, w_sym, SylvesterKind::adjoint);
}

CertifiedSolution solve_lyapunov_obsv(const Eigen::MatrixXd& a, const Eigen::MatrixXd& w_sym) {
  return solve_lyapunov_obsv(SylvesterSolver(a), w_sym);
}

CertifiedSolution solve_lyapunov_qo_obsv(const LqoSystem& sys, const Eigen::MatrixXd& p_gram) {
  Eigen::MatrixXd w = sys.c().transpose() * sys.c();
  for (const auto& mk : sys.m_quad()) w.noalias() += mk * p_gram * mk;
  return solve_lyapunov_obsv(sys.a(), 0.5 * (w + w.transpose()).eval());
}

}  // namespace lqo
