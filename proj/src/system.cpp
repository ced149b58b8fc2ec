// SPDX-License-Identifier: MIT
#include "lqo/system.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

#include "lqo/errors.hpp"

namespace lqo {

Eigen::MatrixXd symmetrize_quadratic(const Eigen::MatrixXd& m_raw) {
  if (m_raw.rows() != m_raw.cols())
    throw std::invalid_argument("symmetrize_quadratic: matrix must be square");
  return 0.5 * (m_raw + m_raw.transpose());
}

double spectral_abscissa(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
  return es.eigenvalues().real().maxCoeff();
}

LqoSystem::LqoSystem(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c,
                     std::vector<Eigen::MatrixXd> m_quad)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), m_quad_(std::move(m_quad)) {
  const Eigen::Index n = a_.rows();
  if (n < 1 || a_.cols() != n) throw std::invalid_argument("LqoSystem: A must be square, n >= 1");
  if (b_.rows() != n || b_.cols() < 1)
    throw std::invalid_argument("LqoSystem: B must be n x m with m >= 1");
  if (c_.cols() != n || c_.rows() < 1)
    throw std::invalid_argument("LqoSystem: C must be p x n with p >= 1");
  if (static_cast<Eigen::Index>(m_quad_.size()) != c_.rows())
    throw std::invalid_argument("LqoSystem: need exactly p quadratic output matrices");
  for (auto& mk : m_quad_) {
    if (mk.rows() != n || mk.cols() != n)
      throw std::invalid_argument("LqoSystem: each M_k must be n x n");
    mk = 0.5 * (mk + mk.transpose()).eval();
  }
}

ValidationReport validate(const LqoSystem& sys, bool check_stability) {
  ValidationReport report;
  if (!sys.a().allFinite() || !sys.b().allFinite() || !sys.c().allFinite())
    report.issues.push_back("non-finite entries in A, B or C");
  for (size_t k = 0; k < sys.m_quad().size(); ++k) {
    const auto& mk = sys.m_quad()[k];
    if (!mk.allFinite()) report.issues.push_back("non-finite entries in M_" + std::to_string(k + 1));
    const double asym = (mk - mk.transpose()).norm();
    report.max_asymmetry = std::max(report.max_asymmetry, asym);
    if (asym > 1e-12 * std::max(1.0, mk.norm()))
      report.issues.push_back("M_" + std::to_string(k + 1) + " is not symmetric");
  }
  if (check_stability) {
    const double abscissa = spectral_abscissa(sys.a());
    report.spectral_abscissa = abscissa;
    report.stable = abscissa < 0.0;
    if (abscissa >= 0.0)
      report.issues.push_back("A is not asymptotically stable (max Re lambda = " +
                              std::to_string(abscissa) + ")");
  }
  return report;
}

Eigen::MatrixXd kronecker_output(const LqoSystem& sys) {
  const Eigen::Index n = sys.n(), p = sys.p();
  Eigen::MatrixXd m_flat(p, n * n);
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto& mk = sys.m_quad(k);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) m_flat(k, i * n + j) = mk(i, j);
  }
  return m_flat;
}

LqoSystem project(const LqoSystem& sys, const ProjectionPair& proj) {
  const Eigen::Index n = sys.n(), r = proj.v.cols();
  if (proj.v.rows() != n || proj.w.rows() != n || proj.w.cols() != r || r < 1)
    throw std::invalid_argument("project: V and W must both be n x r");

  const Eigen::MatrixXd gram = proj.w.transpose() * proj.v;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram);
  const double smin = svd.singularValues()(r - 1);
  const double smax = svd.singularValues()(0);
  if (!(smin > 0.0) || smax / smin > 1e12)
    throw IllConditionedError("project: W^T V is singular or has condition number above 1e12");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(gram);

  Eigen::MatrixXd a_r = lu.solve(proj.w.transpose() * sys.a() * proj.v);
  Eigen::MatrixXd b_r = lu.solve(proj.w.transpose() * sys.b());
  Eigen::MatrixXd c_r = sys.c() * proj.v;
  std::vector<Eigen::MatrixXd> m_r;
  m_r.reserve(sys.m_quad().size());
  for (const auto& mk : sys.m_quad())
    m_r.push_back(proj.v.transpose() * mk * proj.v);  // constructor re-symmetrizes
  return LqoSystem(std::move(a_r), std::move(b_r), std::move(c_r), std::move(m_r));
}

LqoSystem assemble_error_system(const LqoSystem& fom, const LqoSystem& rom) {
  if (fom.m() != rom.m() || fom.p() != rom.p())
    throw std::invalid_argument("assemble_error_system: input/output counts must match");
  const Eigen::Index n = fom.n(), r = rom.n(), m = fom.m(), p = fom.p();

  Eigen::MatrixXd a_e = Eigen::MatrixXd::Zero(n + r, n + r);
  a_e.topLeftCorner(n, n) = fom.a();
  a_e.bottomRightCorner(r, r) = rom.a();

  Eigen::MatrixXd b_e(n + r, m);
  b_e.topRows(n) = fom.b();
  b_e.bottomRows(r) = rom.b();

  Eigen::MatrixXd c_e(p, n + r);
  c_e.leftCols(n) = fom.c();
  c_e.rightCols(r) = -rom.c();

  std::vector<Eigen::MatrixXd> m_e;
  m_e.reserve(static_cast<size_t>(p));
  for (Eigen::Index k = 0; k < p; ++k) {
    Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(n + r, n + r);
    mk.topLeftCorner(n, n) = fom.m_quad(k);
    mk.bottomRightCorner(r, r) = -rom.m_quad(k);
    m_e.push_back(std::move(mk));
  }
  return LqoSystem(std::move(a_e), std::move(b_e), std::move(c_e), std::move(m_e));
}

}  // namespace lqo
