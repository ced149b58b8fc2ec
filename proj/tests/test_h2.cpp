// SPDX-License-Identifier: MIT
#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "lqo/errors.hpp"
#include "lqo/h2.hpp"
#include "lqo/models.hpp"
#include "lqo/system.hpp"

namespace {

lqo::LqoSystem scalar_system(double a, double b, double c, double m) {
  return lqo::LqoSystem(Eigen::MatrixXd::Constant(1, 1, a), Eigen::MatrixXd::Constant(1, 1, b),
                        Eigen::MatrixXd::Constant(1, 1, c),
                        {Eigen::MatrixXd::Constant(1, 1, m)});
}

// Closed forms for a = -1, b = c = m = 1:
//   P = 1/2, Q1 = 1/2, Q2 = 1/4, Q = 3/4.
const lqo::LqoSystem kFom = scalar_system(-1.0, 1.0, 1.0, 1.0);
const lqo::LqoSystem kRom = scalar_system(-2.0, 1.0, 1.0, 1.0);

}  // namespace

TEST_CASE("scalar Gramians match closed forms") {
  const lqo::GramianSet g = lqo::gramians(kFom, true);
  CHECK(g.p_gram(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.q1_gram(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g.q_gram(0, 0) == doctest::Approx(0.75).epsilon(1e-14));
  REQUIRE(g.q2_parts.size() == 1);
  CHECK(g.q2_parts[0](0, 0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK((g.q_gram - g.q1_gram - g.q2_parts[0]).norm() <= 1e-14);
}

TEST_CASE("squared norm agrees between the two Gramian routes") {
  CHECK(lqo::h2_norm_sq(kFom) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(lqo::h2_norm_sq_via_p(kFom) == doctest::Approx(0.75).epsilon(1e-14));

  const lqo::LqoSystem lti = scalar_system(-1.0, 1.0, 1.0, 0.0);
  CHECK(lqo::h2_norm_sq(lti) == doctest::Approx(0.5).epsilon(1e-14));

  const lqo::LqoSystem quad_only = scalar_system(-1.0, 1.0, 0.0, 1.0);
  CHECK(lqo::h2_norm_sq(quad_only) == doctest::Approx(0.25).epsilon(1e-14));

  for (std::uint64_t seed : {61, 62, 63}) {
    const lqo::LqoSystem sys = lqo::random_stable_lqo(12, 2, 2, seed);
    const double q_form = lqo::h2_norm_sq(sys);
    const double p_form = lqo::h2_norm_sq_via_p(sys);
    CHECK(std::abs(q_form - p_form) <= 1e-10 * std::max(std::abs(q_form), 1e-300));
  }
}

TEST_CASE("kernels evaluate to exponentials on the scalar model") {
  const lqo::KernelEvaluator kernels(kFom);
  CHECK(kernels.h1(0.7)(0, 0) == doctest::Approx(std::exp(-0.7)).epsilon(1e-12));
  CHECK(kernels.h2(0.3, 0.9)(0, 0) == doctest::Approx(std::exp(-1.2)).epsilon(1e-12));

  const lqo::LqoSystem wide = lqo::random_stable_lqo(4, 2, 3, 64);
  CHECK(kernels.state_response(1.0).rows() == 1);
  const lqo::KernelEvaluator wide_kernels(wide);
  CHECK(wide_kernels.h1(0.5).rows() == 3);
  CHECK(wide_kernels.h1(0.5).cols() == 2);
  CHECK(wide_kernels.h2(0.5, 0.5).rows() == 3);
  CHECK(wide_kernels.h2(0.5, 0.5).cols() == 4);
}

TEST_CASE("quadrature agrees with the Gramian norm") {
  const double gram = lqo::h2_norm_sq(kFom);
  const double quad = lqo::kernel_quadrature_h2(kFom, 1e-7);
  CHECK(std::abs(gram - quad) <= 1e-6 * gram);

  CHECK_THROWS_AS(lqo::kernel_quadrature_h2(scalar_system(1.0, 1.0, 1.0, 1.0), 1e-7),
                  lqo::UnstableSystemError);
}

TEST_CASE("inner product agrees between its two routes") {
  const double via_z = lqo::h2_inner_product(kFom, kRom);
  const double via_x = lqo::h2_inner_product_via_x(kFom, kRom);
  CHECK(via_z == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(via_x == doctest::Approx(4.0 / 9.0).epsilon(1e-14));

  for (std::uint64_t seed : {71, 72}) {
    const lqo::LqoSystem s1 = lqo::random_stable_lqo(9, 2, 2, seed);
    const lqo::LqoSystem s2 = lqo::random_stable_lqo(5, 2, 2, seed + 10);
    const double z_route = lqo::h2_inner_product(s1, s2);
    const double x_route = lqo::h2_inner_product_via_x(s1, s2);
    CHECK(std::abs(z_route - x_route) <= 1e-9 * std::max(std::abs(z_route), 1e-300));
  }
}

TEST_CASE("self inner product reproduces the squared norm") {
  const double norm_sq = lqo::h2_norm_sq(kFom);
  CHECK(lqo::h2_inner_product(kFom, kFom) == doctest::Approx(norm_sq).epsilon(1e-13));
}

TEST_CASE("squared error matches the closed form and its expansions") {
  const double err = lqo::h2_error_sq(kFom, kRom);
  CHECK(err == doctest::Approx(25.0 / 144.0).epsilon(1e-13));

  // ||S - S_r||^2 = ||S||^2 - 2 <S, S_r> + ||S_r||^2
  const double expanded = lqo::h2_norm_sq(kFom) - 2.0 * lqo::h2_inner_product(kFom, kRom) +
                          lqo::h2_norm_sq(kRom);
  CHECK(err == doctest::Approx(expanded).epsilon(1e-13));

  // The stacked error system realizes the same squared norm.
  const double stacked = lqo::h2_norm_sq(lqo::assemble_error_system(kFom, kRom));
  CHECK(std::abs(err - stacked) <= 1e-9 * std::max(err, 1e-300));

  for (std::uint64_t seed : {81, 82}) {
    const lqo::LqoSystem s1 = lqo::random_stable_lqo(8, 2, 2, seed);
    const lqo::LqoSystem s2 = lqo::random_stable_lqo(3, 2, 2, seed + 10);
    const double direct = lqo::h2_error_sq(s1, s2);
    const double via_error_system = lqo::h2_norm_sq(lqo::assemble_error_system(s1, s2));
    CHECK(std::abs(direct - via_error_system) <= 1e-9 * std::max(std::abs(direct), 1e-300));
  }
}

TEST_CASE("error of a model against itself vanishes") {
  const lqo::LqoSystem sys = lqo::random_stable_lqo(6, 2, 2, 91);
  const double err = lqo::h2_error_sq(sys, sys);
  CHECK(std::abs(err) <= 1e-12 * std::max(lqo::h2_norm_sq(sys), 1.0));
}

TEST_CASE("output bound scale combines the squared input norms") {
  const double rhs = lqo::linf_bound_rhs(kFom, kRom, 2.0, 3.0);
  CHECK(rhs == doctest::Approx((25.0 / 144.0) * 13.0).epsilon(1e-12));
}
