// SPDX-License-Identifier: MIT
#include "lqo/h2.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "lqo/errors.hpp"

namespace lqo {

namespace {

void require_compatible(const LqoSystem& s, const LqoSystem& s_r) {
  if (s.m() != s_r.m() || s.p() != s_r.p())
    throw std::invalid_argument("h2: systems must share input and output counts");
}

void require_stable(const SylvesterSolver& solver, const char* who) {
  if (solver.spectral_abscissa() >= 0.0)
    throw UnstableSystemError(std::string("h2: ") + who + " system is not asymptotically stable");
}

// X and Z of the cross terms; the caller owns the solver for the left system.
struct CrossSolutions {
  Eigen::MatrixXd x, z;
};

CrossSolutions cross_solutions(const SylvesterSolver& solver, const LqoSystem& s,
                               const LqoSystem& s_r) {
  CrossSolutions cs;
  cs.x = solver.solve(s_r.a(), s.b() * s_r.b().transpose(), SylvesterKind::forward).x;
  Eigen::MatrixXd rhs = -s.c().transpose() * s_r.c();
  for (Eigen::Index k = 0; k < s.p(); ++k)
    rhs.noalias() -= s.m_quad(k) * cs.x * s_r.m_quad(k);
  cs.z = solver.solve(s_r.a(), rhs, SylvesterKind::adjoint).x;
  return cs;
}

}  // namespace

GramianSet gramians(const LqoSystem& sys, bool with_parts) {
  SylvesterSolver solver(sys.a());
  require_stable(solver, "the");
  GramianSet g;
  g.p_gram = solve_lyapunov_reach(solver, sys.b()).x;
  g.q1_gram = solve_lyapunov_obsv(solver, sys.c().transpose() * sys.c()).x;

  Eigen::MatrixXd w = sys.c().transpose() * sys.c();
  for (const auto& mk : sys.m_quad()) w.noalias() += mk * g.p_gram * mk;
  g.q_gram = solve_lyapunov_obsv(solver, 0.5 * (w + w.transpose()).eval()).x;

  if (with_parts) {
    g.q2_parts.reserve(sys.m_quad().size());
    for (const auto& mk : sys.m_quad()) {
      Eigen::MatrixXd wk = mk * g.p_gram * mk;
      g.q2_parts.push_back(solve_lyapunov_obsv(solver, 0.5 * (wk + wk.transpose()).eval()).x);
    }
  }
  return g;
}

Eigen::MatrixXd KernelEvaluator::state_response(double t) const {
  return (sys_->a() * t).exp() * sys_->b();
}

Eigen::MatrixXd KernelEvaluator::h1(double t) const { return sys_->c() * state_response(t); }

Eigen::MatrixXd KernelEvaluator::h2(double t1, double t2) const {
  const Eigen::Index m = sys_->m(), p = sys_->p();
  const Eigen::MatrixXd e1 = state_response(t1);
  const Eigen::MatrixXd e2 = state_response(t2);
  Eigen::MatrixXd out(p, m * m);
  for (Eigen::Index k = 0; k < p; ++k) {
    const Eigen::MatrixXd core = e1.transpose() * sys_->m_quad(k) * e2;  // m x m
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) out(k, i * m + j) = core(i, j);
  }
  return out;
}

double h2_norm_sq(const LqoSystem& sys) {
  const GramianSet g = gramians(sys);
  return (sys.b().transpose() * g.q_gram * sys.b()).trace();
}

double h2_norm_sq_via_p(const LqoSystem& sys) {
  SylvesterSolver solver(sys.a());
  require_stable(solver, "the");
  const Eigen::MatrixXd p = solve_lyapunov_reach(solver, sys.b()).x;
  double value = (sys.c() * p * sys.c().transpose()).trace();
  for (const auto& mk : sys.m_quad()) value += (p * mk * p * mk).trace();
  return value;
}

double h2_inner_product(const LqoSystem& s, const LqoSystem& s_r) {
  require_compatible(s, s_r);
  SylvesterSolver solver(s.a());
  require_stable(solver, "the first");
  if (lqo::spectral_abscissa(s_r.a()) >= 0.0)
    throw UnstableSystemError("h2: the second system is not asymptotically stable");
  const CrossSolutions cs = cross_solutions(solver, s, s_r);
  return -(s.b().transpose() * cs.z * s_r.b()).trace();
}

double h2_inner_product_via_x(const LqoSystem& s, const LqoSystem& s_r) {
  require_compatible(s, s_r);
  SylvesterSolver solver(s.a());
  require_stable(solver, "the first");
  if (lqo::spectral_abscissa(s_r.a()) >= 0.0)
    throw UnstableSystemError("h2: the second system is not asymptotically stable");
  const Eigen::MatrixXd x =
      solver.solve(s_r.a(), s.b() * s_r.b().transpose(), SylvesterKind::forward).x;
  double value = (s.c() * x * s_r.c().transpose()).trace();
  for (Eigen::Index k = 0; k < s.p(); ++k)
    value += (x.transpose() * s.m_quad(k) * x * s_r.m_quad(k)).trace();
  return value;
}

double h2_error_sq(const LqoSystem& fom, const LqoSystem& rom, const SylvesterSolver& fom_solver,
                   double fom_h2_sq) {
  require_compatible(fom, rom);
  require_stable(fom_solver, "the full-order");
  const GramianSet rom_grams = gramians(rom);  // throws when the ROM is unstable
  const CrossSolutions cs = cross_solutions(fom_solver, fom, rom);
  const double cross = 2.0 * (fom.b().transpose() * cs.z * rom.b()).trace();
  const double rom_sq = (rom.b().transpose() * rom_grams.q_gram * rom.b()).trace();
  return fom_h2_sq + cross + rom_sq;
}

double h2_error_sq(const LqoSystem& fom, const LqoSystem& rom) {
  SylvesterSolver solver(fom.a());
  require_stable(solver, "the full-order");
  const double fom_sq = (fom.b().transpose() *
                         solve_lyapunov_qo_obsv(fom, solve_lyapunov_reach(solver, fom.b()).x).x *
                         fom.b())
                            .trace();
  return h2_error_sq(fom, rom, solver, fom_sq);
}

double linf_bound_rhs(const LqoSystem& fom, const LqoSystem& rom, double input_l2,
                      double input_kron_l2) {
  const double err_sq = std::max(h2_error_sq(fom, rom), 0.0);
  return err_sq * (input_l2 * input_l2 + input_kron_l2 * input_kron_l2);
}

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNode[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                               -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};

struct QuadGrid {
  std::vector<double> t, w;
};

QuadGrid gl_grid(double t_end, int panels) {
  QuadGrid grid;
  grid.t.reserve(static_cast<size_t>(panels) * 8);
  grid.w.reserve(static_cast<size_t>(panels) * 8);
  const double h = t_end / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int q = 0; q < 8; ++q) {
      grid.t.push_back(mid + 0.5 * h * kGlNode[q]);
      grid.w.push_back(0.5 * h * kGlWeight[q]);
    }
  }
  return grid;
}

double quadrature_pass(const LqoSystem& sys, double t_end, int panels) {
  const QuadGrid grid = gl_grid(t_end, panels);
  const size_t nn = grid.t.size();
  const Eigen::Index p = sys.p();

  std::vector<Eigen::MatrixXd> e(nn);
  for (size_t i = 0; i < nn; ++i) e[i] = (sys.a() * grid.t[i]).exp() * sys.b();

  double lin = 0.0;
  for (size_t i = 0; i < nn; ++i) lin += grid.w[i] * (sys.c() * e[i]).squaredNorm();

  double quad = 0.0;
  for (Eigen::Index k = 0; k < p; ++k) {
    std::vector<Eigen::MatrixXd> me(nn);
    for (size_t i = 0; i < nn; ++i) me[i] = sys.m_quad(k) * e[i];
    for (size_t i = 0; i < nn; ++i)
      for (size_t j = 0; j < nn; ++j)
        quad += grid.w[i] * grid.w[j] * (e[i].transpose() * me[j]).squaredNorm();
  }
  return lin + quad;
}

}  // namespace

double kernel_quadrature_h2(const LqoSystem& sys, double rtol) {
  if (!(rtol >= 1e-8)) throw std::invalid_argument("kernel_quadrature_h2: rtol must be >= 1e-8");
  const double abscissa = lqo::spectral_abscissa(sys.a());
  if (abscissa >= 0.0)
    throw UnstableSystemError("kernel_quadrature_h2: system is not asymptotically stable");

  // Horizon from the decay estimate ||kernel(t)|| <~ scale * e^{abscissa t};
  // past t_end the truncated tail is far below rtol.
  double scale = std::max({10.0, sys.c().norm() * sys.b().norm()});
  for (const auto& mk : sys.m_quad()) scale = std::max(scale, mk.norm() * sys.b().squaredNorm());
  const double t_end = 1.5 * std::log(scale / rtol) / (-abscissa);

  double prev = quadrature_pass(sys, t_end, 16);
  for (int panels = 32; panels <= 512; panels *= 2) {
    const double cur = quadrature_pass(sys, t_end, panels);
    if (std::abs(cur - prev) <= rtol * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
  throw QuadratureError("kernel_quadrature_h2: no convergence within the panel budget");
}

}  // namespace lqo
