// SPDX-License-Identifier: MIT
#include "lqo/models.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace lqo {

AdvectionDiffusionModel build_advection_diffusion(const AdvectionDiffusionConfig& config) {
  if (config.n < 3) throw std::invalid_argument("advection-diffusion: need n >= 3");
  if (!(config.alpha > 0.0)) throw std::invalid_argument("advection-diffusion: need alpha > 0");
  if (!(config.beta >= 0.0)) throw std::invalid_argument("advection-diffusion: need beta >= 0");

  const Eigen::Index n = config.n;
  const double h = 1.0 / static_cast<double>(n);
  const double diff = config.alpha / (h * h);
  const double adv = config.beta / h;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, 2);

  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    a(i, i) = -2.0 * diff - adv;
    if (i + 1 < n) a(i, i + 1) = diff;
    if (i > 0) a(i, i - 1) = diff + adv;
  }
  b(0, 0) = diff + adv;  // Dirichlet value enters through the ghost neighbor

  // Right boundary: centered flux condition through a ghost point; the
  // diffusion coefficient cancels out of the input column.
  a(n - 1, n - 1) = -2.0 * diff - adv;
  a(n - 1, n - 2) = 2.0 * diff + adv;
  b(n - 1, 1) = 2.0 / h;

  // (h/2) ||v - 1||^2 = (h/2) v'v - h 1'v + h n / 2
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(1, n, -h);
  std::vector<Eigen::MatrixXd> ms{(h / 2.0) * Eigen::MatrixXd::Identity(n, n)};

  AdvectionDiffusionModel model{LqoSystem(a, b, c, ms), h * static_cast<double>(n) / 2.0};
  return model;
}

namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                                double scale) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * dist(rng);
  return m;
}

}  // namespace

LqoSystem random_stable_lqo(Eigen::Index n, Eigen::Index m, Eigen::Index p, std::uint64_t seed,
                            double gap) {
  if (n < 1 || m < 1 || p < 1)
    throw std::invalid_argument("random_stable_lqo: dimensions must be positive");
  if (!(gap > 0.0)) throw std::invalid_argument("random_stable_lqo: gap must be positive");

  std::mt19937_64 rng(seed);
  Eigen::MatrixXd a = gaussian_matrix(n, n, rng, 1.0 / std::sqrt(static_cast<double>(n)));
  a.diagonal().array() -= gap + spectral_abscissa(a);

  const Eigen::MatrixXd b = gaussian_matrix(n, m, rng, 1.0);
  const Eigen::MatrixXd c = gaussian_matrix(p, n, rng, 1.0);
  std::vector<Eigen::MatrixXd> ms;
  ms.reserve(static_cast<size_t>(p));
  for (Eigen::Index k = 0; k < p; ++k) {
    const Eigen::MatrixXd raw = gaussian_matrix(n, n, rng, 1.0 / std::sqrt(static_cast<double>(n)));
    ms.push_back(0.5 * (raw + raw.transpose()));
  }
  return LqoSystem(a, b, c, ms);
}

}  // namespace lqo
