// SPDX-License-Identifier: MIT
#include "lqo/bt.hpp"

#include <cmath>
#include <stdexcept>

#include "lqo/errors.hpp"
#include "lqo/h2.hpp"

namespace lqo {

namespace {

// Symmetric square-root factor F with X = F F'; tiny negative eigenvalues
// from roundoff are clipped.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& x) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("bt: eigendecomposition of a Gramian failed");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

}  // namespace

BtFactorization::BtFactorization(const LqoSystem& fom) : fom_(fom) {
  const GramianSet g = gramians(fom_);
  l_ = psd_factor(g.p_gram);
  u_ = psd_factor(g.q_gram);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(u_.transpose() * l_,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  sigma_ = svd.singularValues();
  svd_u_ = svd.matrixU();
  svd_v_ = svd.matrixV();
}

Eigen::Index BtFactorization::numerical_rank() const {
  if (sigma_.size() == 0 || !(sigma_(0) > 0.0)) return 0;
  Eigen::Index rank = 0;
  while (rank < sigma_.size() && sigma_(rank) > 1e-13 * sigma_(0)) ++rank;
  return rank;
}

BalancedReduction BtFactorization::truncate(Eigen::Index r) const {
  if (r < 1 || r > fom_.n())
    throw std::invalid_argument("bt: reduced order must satisfy 1 <= r <= n");
  if (r > numerical_rank())
    throw IllConditionedError("bt: requested order exceeds the numerical rank of the Gramian pair");

  const Eigen::VectorXd scale = sigma_.head(r).cwiseSqrt().cwiseInverse();
  ProjectionPair pair;
  pair.v = l_ * svd_v_.leftCols(r) * scale.asDiagonal();
  pair.w = u_ * svd_u_.leftCols(r) * scale.asDiagonal();

  BalancedReduction red{project(fom_, pair), sigma_, pair, false};
  red.rom_stable = spectral_abscissa(red.rom.a()) < 0.0;
  return red;
}

BalancedReduction balanced_truncation(const LqoSystem& fom, Eigen::Index r) {
  return BtFactorization(fom).truncate(r);
}

}  // namespace lqo
