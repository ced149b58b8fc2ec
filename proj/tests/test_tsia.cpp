// SPDX-License-Identifier: MIT
#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "lqo/errors.hpp"
#include "lqo/h2.hpp"
#include "lqo/models.hpp"
#include "lqo/opt.hpp"
#include "lqo/tsia.hpp"

TEST_CASE("default initial model spreads poles across four decades") {
  const lqo::LqoSystem one = lqo::default_init(10, 2, 1, 1);
  CHECK(one.a()(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));

  const lqo::LqoSystem three = lqo::default_init(10, 2, 1, 3);
  CHECK(three.a()(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(three.a()(1, 1) == doctest::Approx(-100.0).epsilon(1e-12));
  CHECK(three.a()(2, 2) == doctest::Approx(-10000.0).epsilon(1e-12));
  CHECK(three.b().isApprox(Eigen::MatrixXd::Identity(3, 2)));
  CHECK(three.c().isApprox(Eigen::MatrixXd::Identity(1, 3)));
  CHECK(three.m_quad(0).isApprox(Eigen::MatrixXd::Identity(3, 3)));
}

TEST_CASE("configuration preconditions are enforced") {
  const lqo::LqoSystem fom = lqo::random_stable_lqo(6, 1, 1, 201);

  lqo::TsiaConfig bad_r;
  bad_r.r = 7;
  CHECK_THROWS_AS(lqo::tsia(fom, bad_r), std::invalid_argument);

  lqo::TsiaConfig bad_tol;
  bad_tol.r = 2;
  bad_tol.tol = 0.0;
  CHECK_THROWS_AS(lqo::tsia(fom, bad_tol), std::invalid_argument);

  lqo::TsiaConfig no_norm;
  no_norm.r = 2;
  no_norm.compute_fom_norm = false;
  CHECK_THROWS_AS(lqo::tsia(fom, no_norm), std::invalid_argument);

  lqo::TsiaConfig tau_only;
  tau_only.r = 2;
  tau_only.monitor = lqo::TsiaMonitor::tail_tau;
  tau_only.compute_fom_norm = false;
  CHECK_NOTHROW(lqo::tsia(fom, tau_only));
}

TEST_CASE("iteration converges on a small random model") {
  const lqo::LqoSystem fom = lqo::random_stable_lqo(10, 2, 2, 202);
  lqo::TsiaConfig config;
  config.r = 3;
  config.tol = 1e-12;
  config.max_iters = 400;

  const lqo::TsiaRun run = lqo::tsia(fom, config);
  CHECK(run.converged);
  CHECK(run.reason == lqo::TsiaStopReason::converged);
  REQUIRE(!run.history.empty());
  CHECK(run.history.back().rom_stable);
  REQUIRE(run.history.back().delta_eta.has_value());
  CHECK(*run.history.back().delta_eta <= 1e-12);
  CHECK(run.projectors.v.rows() == 10);
  CHECK(run.projectors.v.cols() == 3);

  // A converged iterate is close to stationary.
  const double fonc = lqo::fonc_residuals(fom, run.rom).combined_measure;
  CHECK(fonc <= 1e-6);
}

TEST_CASE("full-order iteration recovers the model") {
  const lqo::LqoSystem fom = lqo::random_stable_lqo(3, 1, 1, 203);
  lqo::TsiaConfig config;
  config.r = 3;
  config.tol = 1e-12;
  config.max_iters = 50;
  config.converge_on_absolute_eta = 1e-13;

  const lqo::TsiaRun run = lqo::tsia(fom, config);
  CHECK(run.reason != lqo::TsiaStopReason::solver_failure);
  REQUIRE(run.fom_h2_sq.has_value());
  const auto eta = lqo::relative_h2_error_sq(fom, run.rom, *run.fom_h2_sq);
  REQUIRE(eta.has_value());
  CHECK(*eta <= 1e-8);
}

TEST_CASE("single projection sweep keeps dimensions and improves the seed") {
  const lqo::LqoSystem fom = lqo::random_stable_lqo(8, 2, 1, 204);
  const lqo::LqoSystem seed = lqo::default_init(8, 2, 1, 2);
  const lqo::LqoSystem stepped = lqo::tsia_step(fom, seed);
  CHECK(stepped.n() == 2);
  CHECK(stepped.m() == 2);
  CHECK(stepped.p() == 1);

  const double fom_sq = lqo::h2_norm_sq(fom);
  const auto before = lqo::relative_h2_error_sq(fom, seed, fom_sq);
  const auto after = lqo::relative_h2_error_sq(fom, stepped, fom_sq);
  REQUIRE(before.has_value());
  REQUIRE(after.has_value());
  CHECK(*after < *before);
}

TEST_CASE("eta and tau satisfy their exchange identity") {
  const lqo::LqoSystem fom = lqo::random_stable_lqo(9, 2, 2, 205);
  const lqo::LqoSystem rom = lqo::random_stable_lqo(3, 2, 2, 206);

  const double fom_sq = lqo::h2_norm_sq(fom);
  const auto eta = lqo::relative_h2_error_sq(fom, rom, fom_sq);
  const auto tau = lqo::error_tail_term(fom, rom);
  REQUIRE(eta.has_value());
  REQUIRE(tau.has_value());
  CHECK(std::abs(*tau - (*eta * fom_sq - fom_sq)) <=
        1e-10 * std::max({std::abs(*tau), fom_sq, 1.0}));

  // eta also matches the direct squared-error route.
  const double direct = lqo::h2_error_sq(fom, rom) / fom_sq;
  CHECK(std::abs(*eta - direct) <= 1e-10 * std::max(std::abs(direct), 1e-300));
}

TEST_CASE("monitors are absent for unstable reduced models") {
  const lqo::LqoSystem fom = lqo::random_stable_lqo(6, 1, 1, 207);
  const lqo::LqoSystem unstable(Eigen::MatrixXd::Constant(1, 1, 0.5),
                                Eigen::MatrixXd::Constant(1, 1, 1.0),
                                Eigen::MatrixXd::Constant(1, 1, 1.0),
                                {Eigen::MatrixXd::Constant(1, 1, 1.0)});
  CHECK_FALSE(lqo::relative_h2_error_sq(fom, unstable, 1.0).has_value());
  CHECK_FALSE(lqo::error_tail_term(fom, unstable).has_value());
}

TEST_CASE("iteration budget is respected") {
  const lqo::LqoSystem fom = lqo::random_stable_lqo(10, 2, 2, 208);
  lqo::TsiaConfig config;
  config.r = 3;
  config.tol = 1e-16;
  config.max_iters = 4;

  const lqo::TsiaRun run = lqo::tsia(fom, config);
  CHECK_FALSE(run.converged);
  CHECK(run.reason == lqo::TsiaStopReason::max_iters);
  CHECK(run.history.size() == 4);
}
