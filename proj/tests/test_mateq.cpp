// SPDX-License-Identifier: MIT
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "lqo/errors.hpp"
#include "lqo/mateq.hpp"
#include "lqo/models.hpp"

namespace {

Eigen::MatrixXd seeded_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

TEST_CASE("scalar Lyapunov solution matches the closed form") {
  // a = -1, b = sqrt(2):  -p - p + 2 = 0  =>  p = 1
  const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, -1.0);
  const Eigen::MatrixXd b = Eigen::MatrixXd::Constant(1, 1, std::sqrt(2.0));
  const lqo::CertifiedSolution sol = lqo::solve_lyapunov_reach(a, b);
  CHECK(sol.x(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sol.cert.relative_residual <= 1e-14);
}

TEST_CASE("diagonal Lyapunov solution matches the closed form") {
  Eigen::MatrixXd a(2, 2);
  a << -2.0, 0.0, 0.0, -3.0;
  Eigen::MatrixXd b(2, 2);
  b << 2.0, 0.0, 0.0, std::sqrt(6.0);
  const lqo::CertifiedSolution sol = lqo::solve_lyapunov_reach(a, b);
  CHECK(sol.x(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sol.x(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(sol.x(0, 1)) <= 1e-15);
}

TEST_CASE("scalar Sylvester solutions match closed forms") {
  // -x + x*(-2) + 3 = 0  =>  x = 1
  lqo::SylvesterProblem forward{Eigen::MatrixXd::Constant(1, 1, -1.0),
                                Eigen::MatrixXd::Constant(1, 1, -2.0),
                                Eigen::MatrixXd::Constant(1, 1, 3.0),
                                lqo::SylvesterKind::forward};
  CHECK(lqo::solve_sylvester(forward).x(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

  // -x + x*(-1) + f = 0 row by row  =>  x = f / 2
  Eigen::MatrixXd f(2, 1);
  f << 2.0, 4.0;
  lqo::SylvesterProblem tall{-Eigen::MatrixXd::Identity(2, 2),
                             Eigen::MatrixXd::Constant(1, 1, -1.0), f,
                             lqo::SylvesterKind::forward};
  const Eigen::MatrixXd x = lqo::solve_sylvester(tall).x;
  CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x(1, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("adjoint solves satisfy their defining equation") {
  const Eigen::MatrixXd a = lqo::random_stable_lqo(6, 1, 1, 11).a();
  const Eigen::MatrixXd ar = lqo::random_stable_lqo(3, 1, 1, 12).a();
  const Eigen::MatrixXd f = seeded_matrix(6, 3, 13);

  lqo::SylvesterSolver solver(a);
  const Eigen::MatrixXd x = solver.solve(ar, f, lqo::SylvesterKind::adjoint).x;
  const double res = (a.transpose() * x + x * ar + f).norm();
  CHECK(res <= 1e-10 * (a.norm() * x.norm() + x.norm() * ar.norm() + f.norm()));
}

TEST_CASE("overlapping spectra are reported") {
  lqo::SylvesterProblem clash{Eigen::MatrixXd::Constant(1, 1, -1.0),
                              Eigen::MatrixXd::Constant(1, 1, 1.0),
                              Eigen::MatrixXd::Constant(1, 1, 1.0),
                              lqo::SylvesterKind::forward};
  CHECK_THROWS_AS(lqo::solve_sylvester(clash), lqo::SpectralOverlapError);
}

TEST_CASE("Lyapunov wrappers reject unstable coefficients") {
  const Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1, 1, 0.25);
  const Eigen::MatrixXd b = Eigen::MatrixXd::Constant(1, 1, 1.0);
  CHECK_THROWS_AS(lqo::solve_lyapunov_reach(a, b), lqo::UnstableSystemError);
  CHECK_THROWS_AS(lqo::solve_lyapunov_obsv(a, b * b.transpose()), lqo::UnstableSystemError);
}

TEST_CASE("repeat solves are bitwise identical") {
  const Eigen::MatrixXd a = lqo::random_stable_lqo(10, 1, 1, 21).a();
  const Eigen::MatrixXd ar = lqo::random_stable_lqo(4, 1, 1, 22).a();
  const Eigen::MatrixXd f = seeded_matrix(10, 4, 23);

  lqo::SylvesterSolver s1(a);
  lqo::SylvesterSolver s2(a);
  const Eigen::MatrixXd x1 = s1.solve(ar, f, lqo::SylvesterKind::forward).x;
  const Eigen::MatrixXd x2 = s2.solve(ar, f, lqo::SylvesterKind::forward).x;
  CHECK((x1.array() == x2.array()).all());
}

TEST_CASE("large nonsymmetric solves stay certified") {
  const lqo::LqoSystem fom = lqo::build_advection_diffusion({300, 0.01, 1.0}).system;
  const lqo::LqoSystem rom = lqo::random_stable_lqo(30, 2, 1, 31);

  lqo::SylvesterSolver solver(fom.a());
  const Eigen::MatrixXd f = fom.b() * rom.b().transpose();
  const lqo::CertifiedSolution fwd = solver.solve(rom.a(), f, lqo::SylvesterKind::forward);
  CHECK(fwd.cert.relative_residual <= 1e-10);

  const lqo::CertifiedSolution adj =
      solver.solve(rom.a(), seeded_matrix(300, 30, 32), lqo::SylvesterKind::adjoint);
  CHECK(adj.cert.relative_residual <= 1e-10);
}

TEST_CASE("paired solves satisfy the trace exchange identity") {
  for (std::uint64_t seed : {41, 42, 43}) {
    const Eigen::MatrixXd a = lqo::random_stable_lqo(7, 1, 1, seed).a();
    const Eigen::MatrixXd ar = lqo::random_stable_lqo(3, 1, 1, seed + 100).a();
    const Eigen::MatrixXd d = seeded_matrix(7, 3, seed + 200);
    const Eigen::MatrixXd f = seeded_matrix(7, 3, seed + 300);

    lqo::SylvesterSolver solver(a);
    const Eigen::MatrixXd y = solver.solve(ar, d, lqo::SylvesterKind::forward).x;
    const Eigen::MatrixXd w = solver.solve(ar, f, lqo::SylvesterKind::adjoint).x;

    const double lhs = (d.transpose() * w).trace();
    const double rhs = (f.transpose() * y).trace();
    CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
  }
}
