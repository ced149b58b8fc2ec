// SPDX-License-Identifier: MIT
//
// Balanced truncation for systems with quadratic outputs.  The pair being
// balanced is the reachability Gramian P and the observability Gramian Q of
// the quadratic-output energy, so the singular values of the product carry
// both the linear and the quadratic output contributions.
#pragma once

#include <Eigen/Dense>

#include "lqo/system.hpp"

namespace lqo {

struct BalancedReduction {
  LqoSystem rom;
  Eigen::VectorXd hankel_like_values;  // all n values, descending
  ProjectionPair projectors;
  bool rom_stable = false;
};

// Square-root factorization shared across truncation orders: factor the two
// Gramians once, take the SVD of U'L, and cut at the requested order.
class BtFactorization {
 public:
  explicit BtFactorization(const LqoSystem& fom);

  const Eigen::VectorXd& singular_values() const { return sigma_; }
  Eigen::Index numerical_rank() const;

  BalancedReduction truncate(Eigen::Index r) const;

 private:
  LqoSystem fom_;
  Eigen::MatrixXd l_;  // P = L L'
  Eigen::MatrixXd u_;  // Q = U U'
  Eigen::MatrixXd svd_u_, svd_v_;
  Eigen::VectorXd sigma_;
};

BalancedReduction balanced_truncation(const LqoSystem& fom, Eigen::Index r);

}  // namespace lqo
