// SPDX-License-Identifier: MIT
#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "lqo/errors.hpp"
#include "lqo/models.hpp"
#include "lqo/opt.hpp"

namespace {

lqo::LqoSystem scalar_system(double a, double b, double c, double m) {
  return lqo::LqoSystem(Eigen::MatrixXd::Constant(1, 1, a), Eigen::MatrixXd::Constant(1, 1, b),
                        Eigen::MatrixXd::Constant(1, 1, c),
                        {Eigen::MatrixXd::Constant(1, 1, m)});
}

const lqo::LqoSystem kFom = scalar_system(-1.0, 1.0, 1.0, 1.0);
const lqo::LqoSystem kRom = scalar_system(-2.0, 1.0, 1.0, 1.0);

}  // namespace

TEST_CASE("scalar coupling solutions match closed forms") {
  const lqo::CouplingSolutions cs = lqo::coupling_solutions(kFom, kRom);
  CHECK(cs.x(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(cs.z(0, 0) == doctest::Approx(-4.0 / 9.0).epsilon(1e-14));
  CHECK(cs.z1(0, 0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-14));
  CHECK(cs.p_r(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(cs.q_r(0, 0) == doctest::Approx(5.0 / 16.0).epsilon(1e-14));
  CHECK(cs.q1_r(0, 0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("coupling solutions of a model with itself reduce to its Gramians") {
  // X = P, Z = -Q, Z1 = -Q1 when the second argument is the model itself.
  const lqo::CouplingSolutions cs = lqo::coupling_solutions(kFom, kFom);
  CHECK(cs.x(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cs.z(0, 0) == doctest::Approx(-0.75).epsilon(1e-14));
  CHECK(cs.z1(0, 0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(cs.p_r(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cs.q_r(0, 0) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("scalar gradients match closed forms") {
  const lqo::GradientSet g = lqo::gradients(kFom, kRom, lqo::coupling_solutions(kFom, kRom));
  CHECK(g.grad_a(0, 0) == doctest::Approx(-79.0 / 432.0).epsilon(1e-13));
  CHECK(g.grad_b(0, 0) == doctest::Approx(-13.0 / 36.0).epsilon(1e-13));
  CHECK(g.grad_c(0, 0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-13));
  REQUIRE(g.grad_m.size() == 1);
  CHECK(g.grad_m[0](0, 0) == doctest::Approx(-7.0 / 72.0).epsilon(1e-13));
}

TEST_CASE("stationarity residuals are half the gradients") {
  const lqo::FoncResiduals r = lqo::fonc_residuals(kFom, kRom);
  CHECK(r.res_a(0, 0) == doctest::Approx(-79.0 / 864.0).epsilon(1e-13));
  CHECK(r.res_m[0](0, 0) == doctest::Approx(-7.0 / 144.0).epsilon(1e-13));
  CHECK(r.combined_measure > 0.0);
}

TEST_CASE("a model is stationary with respect to itself") {
  const lqo::FoncResiduals self = lqo::fonc_residuals(kFom, kFom);
  CHECK(self.combined_measure <= 1e-12);

  const lqo::LqoSystem sys = lqo::random_stable_lqo(7, 2, 2, 101);
  const lqo::FoncResiduals r = lqo::fonc_residuals(sys, sys);
  CHECK(r.combined_measure <= 1e-10);
}

TEST_CASE("projectors from the coupling solutions are bi-orthogonal at a fixed point") {
  const lqo::CouplingSolutions cs = lqo::coupling_solutions(kFom, kFom);
  const lqo::ProjectionPair pair = lqo::optimal_projectors(cs);
  CHECK((pair.w.transpose() * pair.v - Eigen::MatrixXd::Identity(1, 1)).norm() <= 1e-13);
}

TEST_CASE("singular reduced Gramians are rejected") {
  lqo::CouplingSolutions cs = lqo::coupling_solutions(kFom, kRom);
  cs.p_r.setZero();
  CHECK_THROWS_AS(lqo::optimal_projectors(cs), lqo::IllConditionedError);
}

TEST_CASE("finite differences confirm the analytic gradients") {
  const lqo::LqoSystem fom = lqo::random_stable_lqo(8, 2, 2, 7);
  const lqo::LqoSystem rom = lqo::random_stable_lqo(3, 2, 2, 8);

  const lqo::FdCheckReport coarse = lqo::gradient_fd_check(fom, rom, 1e-2);
  const lqo::FdCheckReport mid = lqo::gradient_fd_check(fom, rom, 1e-4);
  const lqo::FdCheckReport fine = lqo::gradient_fd_check(fom, rom, 1e-6);

  CHECK(coarse.total_skipped() == 0);
  CHECK(mid.max_rel() < coarse.max_rel());
  CHECK(fine.max_rel() < coarse.max_rel());
  CHECK(fine.max_rel() <= 1e-5);
}

TEST_CASE("gradient checks reject bad steps") {
  CHECK_THROWS_AS(lqo::gradient_fd_check(kFom, kRom, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lqo::gradient_fd_check(kFom, kRom, -1e-6), std::invalid_argument);
}
