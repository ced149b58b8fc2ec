// SPDX-License-Identifier: MIT
#include "lqo/opt.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "lqo/errors.hpp"
#include "lqo/h2.hpp"
#include "lqo/mateq.hpp"

namespace lqo {

namespace {

double stacked_norm(const std::vector<Eigen::MatrixXd>& ms) {
  double sq = 0.0;
  for (const auto& m : ms) sq += m.squaredNorm();
  return std::sqrt(sq);
}

}  // namespace

CouplingSolutions coupling_solutions(const LqoSystem& fom, const LqoSystem& rom) {
  if (fom.m() != rom.m() || fom.p() != rom.p())
    throw std::invalid_argument("coupling_solutions: systems must share input and output counts");

  SylvesterSolver fom_solver(fom.a());
  if (fom_solver.spectral_abscissa() >= 0.0)
    throw UnstableSystemError("coupling_solutions: full-order system is not asymptotically stable");
  SylvesterSolver rom_solver(rom.a());
  if (rom_solver.spectral_abscissa() >= 0.0)
    throw UnstableSystemError("coupling_solutions: reduced system is not asymptotically stable");

  CouplingSolutions cs;
  cs.x = fom_solver.solve(rom.a(), fom.b() * rom.b().transpose(), SylvesterKind::forward).x;

  Eigen::MatrixXd rhs = -fom.c().transpose() * rom.c();
  for (Eigen::Index k = 0; k < fom.p(); ++k)
    rhs.noalias() -= fom.m_quad(k) * cs.x * rom.m_quad(k);
  cs.z = fom_solver.solve(rom.a(), rhs, SylvesterKind::adjoint).x;
  cs.z1 =
      fom_solver.solve(rom.a(), (-fom.c().transpose() * rom.c()).eval(), SylvesterKind::adjoint).x;

  cs.p_r = solve_lyapunov_reach(rom_solver, rom.b()).x;
  Eigen::MatrixXd w = rom.c().transpose() * rom.c();
  for (const auto& mk : rom.m_quad()) w.noalias() += mk * cs.p_r * mk;
  cs.q_r = solve_lyapunov_obsv(rom_solver, 0.5 * (w + w.transpose()).eval()).x;
  cs.q1_r = solve_lyapunov_obsv(rom_solver, rom.c().transpose() * rom.c()).x;
  return cs;
}

GradientSet gradients(const LqoSystem& fom, const LqoSystem& rom,
                      const CouplingSolutions& coupling) {
  const Eigen::MatrixXd big_q = 2.0 * coupling.q_r - coupling.q1_r;
  const Eigen::MatrixXd big_z = 2.0 * coupling.z - coupling.z1;

  GradientSet g;
  g.grad_a = 2.0 * (big_q * coupling.p_r + big_z.transpose() * coupling.x);
  g.grad_b = 2.0 * (big_q * rom.b() + big_z.transpose() * fom.b());
  g.grad_c = 2.0 * (rom.c() * coupling.p_r - fom.c() * coupling.x);
  g.grad_m.reserve(rom.m_quad().size());
  for (Eigen::Index k = 0; k < rom.p(); ++k)
    g.grad_m.push_back(2.0 * (coupling.p_r * rom.m_quad(k) * coupling.p_r -
                              coupling.x.transpose() * fom.m_quad(k) * coupling.x));

  g.grad_a_norm = g.grad_a.norm();
  g.grad_b_norm = g.grad_b.norm();
  g.grad_c_norm = g.grad_c.norm();
  g.grad_m_norm = stacked_norm(g.grad_m);
  return g;
}

FoncResiduals fonc_residuals(const LqoSystem& fom, const LqoSystem& rom) {
  return fonc_residuals(fom, rom, coupling_solutions(fom, rom));
}

FoncResiduals fonc_residuals(const LqoSystem& fom, const LqoSystem& rom,
                             const CouplingSolutions& coupling) {
  const GradientSet g = gradients(fom, rom, coupling);

  FoncResiduals r;
  r.res_a = 0.5 * g.grad_a;
  r.res_b = 0.5 * g.grad_b;
  r.res_c = 0.5 * g.grad_c;
  r.res_m.reserve(g.grad_m.size());
  for (const auto& gm : g.grad_m) r.res_m.push_back(0.5 * gm);
  r.res_a_norm = r.res_a.norm();
  r.res_b_norm = r.res_b.norm();
  r.res_c_norm = r.res_c.norm();
  r.res_m_norm = stacked_norm(r.res_m);

  // Scale each family by the size of the terms it balances so the summary is
  // meaningful across model scalings.
  const double qn = coupling.q_r.norm(), pn = coupling.p_r.norm();
  const double ref_a = qn * pn;
  const double ref_b = qn * rom.b().norm();
  const double ref_c = fom.c().norm() * coupling.x.norm();
  double ref_m = 0.0;
  for (Eigen::Index k = 0; k < rom.p(); ++k)
    ref_m = std::max(ref_m, (coupling.x.transpose() * fom.m_quad(k) * coupling.x).norm());
  const double largest = std::max({ref_a, ref_b, ref_c, ref_m});
  const double eps = 1e-14 * std::max(1.0, largest);

  r.combined_measure = std::max({r.res_a_norm / (ref_a + eps), r.res_b_norm / (ref_b + eps),
                                 r.res_c_norm / (ref_c + eps), r.res_m_norm / (ref_m + eps)});
  return r;
}

ProjectionPair optimal_projectors(const CouplingSolutions& coupling) {
  const Eigen::MatrixXd big_q = 2.0 * coupling.q_r - coupling.q1_r;
  const Eigen::MatrixXd big_z = 2.0 * coupling.z - coupling.z1;

  auto checked_svd = [](const Eigen::MatrixXd& m, const char* name) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0), smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || smax / smin > 1e12)
      throw IllConditionedError(std::string("optimal_projectors: ") + name +
                                " is numerically singular");
    return svd;
  };

  ProjectionPair pair;
  // V' = P_r^{-1} X'   and   W' = -(2 Q_r - Q1_r)^{-1} (2 Z - Z1)'
  pair.v = checked_svd(coupling.p_r, "the reduced reachability Gramian")
               .solve(coupling.x.transpose())
               .transpose();
  pair.w = -checked_svd(big_q, "the combined reduced observability Gramian")
                .solve(big_z.transpose())
                .transpose();
  return pair;
}

double FdCheckReport::max_rel() const {
  return std::max({a.rel_dev, b.rel_dev, c.rel_dev, m.rel_dev});
}

int FdCheckReport::total_skipped() const {
  return a.skipped + b.skipped + c.skipped + m.skipped;
}

namespace {

struct FdContext {
  const LqoSystem& fom;
  const SylvesterSolver& fom_solver;
  double fom_h2_sq;
  double step;

  // J at the perturbed reduced model, or nullopt when it leaves the
  // stability region.
  std::optional<double> objective(const LqoSystem& rom) const {
    try {
      return h2_error_sq(fom, rom, fom_solver, fom_h2_sq);
    } catch (const UnstableSystemError&) {
      return std::nullopt;
    }
  }
};

// One family of central differences.  `perturb` mutates a copy of the
// reduced model in place for a given entry index and signed step.
template <typename Perturb>
FdCheckFamily fd_family(const FdContext& ctx, const LqoSystem& rom, const Eigen::MatrixXd& analytic,
                        Eigen::Index count, Perturb perturb) {
  Eigen::VectorXd fd(count), an(count);
  Eigen::Array<bool, Eigen::Dynamic, 1> keep(count);
  for (Eigen::Index idx = 0; idx < count; ++idx) {
    const auto plus = ctx.objective(perturb(rom, idx, ctx.step));
    const auto minus = ctx.objective(perturb(rom, idx, -ctx.step));
    keep(idx) = plus.has_value() && minus.has_value();
    fd(idx) = keep(idx) ? (*plus - *minus) / (2.0 * ctx.step) : 0.0;
    an(idx) = analytic(idx / analytic.cols(), idx % analytic.cols());
  }

  FdCheckFamily fam;
  double dev_sq = 0.0, an_sq = 0.0;
  for (Eigen::Index idx = 0; idx < count; ++idx) {
    if (!keep(idx)) {
      ++fam.skipped;
      continue;
    }
    dev_sq += (an(idx) - fd(idx)) * (an(idx) - fd(idx));
    an_sq += an(idx) * an(idx);
  }
  fam.grad_norm = std::sqrt(an_sq);
  fam.abs_dev = std::sqrt(dev_sq);
  fam.rel_dev = fam.abs_dev / std::max(fam.grad_norm, 1e-300);
  return fam;
}

}  // namespace

FdCheckReport gradient_fd_check(const LqoSystem& fom, const LqoSystem& rom, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("gradient_fd_check: step must be positive");

  SylvesterSolver fom_solver(fom.a());
  if (fom_solver.spectral_abscissa() >= 0.0)
    throw UnstableSystemError("gradient_fd_check: full-order system is not asymptotically stable");
  const double fom_h2_sq =
      (fom.b().transpose() *
       solve_lyapunov_qo_obsv(fom, solve_lyapunov_reach(fom_solver, fom.b()).x).x * fom.b())
          .trace();
  const FdContext ctx{fom, fom_solver, fom_h2_sq, step};

  const GradientSet g = gradients(fom, rom, coupling_solutions(fom, rom));
  const Eigen::Index r = rom.n(), m = rom.m(), p = rom.p();

  FdCheckReport report;
  report.a = fd_family(ctx, rom, g.grad_a, r * r, [](const LqoSystem& base, Eigen::Index idx,
                                                     double h) {
    Eigen::MatrixXd a = base.a();
    a(idx / a.cols(), idx % a.cols()) += h;
    return LqoSystem(a, base.b(), base.c(), base.m_quad());
  });
  report.b = fd_family(ctx, rom, g.grad_b, r * m, [](const LqoSystem& base, Eigen::Index idx,
                                                     double h) {
    Eigen::MatrixXd b = base.b();
    b(idx / b.cols(), idx % b.cols()) += h;
    return LqoSystem(base.a(), b, base.c(), base.m_quad());
  });
  report.c = fd_family(ctx, rom, g.grad_c, p * r, [](const LqoSystem& base, Eigen::Index idx,
                                                     double h) {
    Eigen::MatrixXd c = base.c();
    c(idx / c.cols(), idx % c.cols()) += h;
    return LqoSystem(base.a(), base.b(), c, base.m_quad());
  });

  // M gradients, all output channels stacked.  Off-diagonal perturbations are
  // split across (i,j) and (j,i) to stay inside the symmetric parametrization
  // while still estimating the plain entrywise gradient.
  {
    double dev_sq = 0.0, an_sq = 0.0;
    int skipped = 0;
    for (Eigen::Index k = 0; k < p; ++k) {
      for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = i; j < r; ++j) {
          auto perturbed = [&](double h) {
            std::vector<Eigen::MatrixXd> ms = rom.m_quad();
            if (i == j) {
              ms[k](i, i) += h;
            } else {
              ms[k](i, j) += 0.5 * h;
              ms[k](j, i) += 0.5 * h;
            }
            return LqoSystem(rom.a(), rom.b(), rom.c(), ms);
          };
          const auto plus = ctx.objective(perturbed(step));
          const auto minus = ctx.objective(perturbed(-step));
          if (!plus || !minus) {
            skipped += (i == j) ? 1 : 2;
            continue;
          }
          const double fd = (*plus - *minus) / (2.0 * step);
          const double an = g.grad_m[k](i, j);
          const int mult = (i == j) ? 1 : 2;  // (i,j) and (j,i) carry the same deviation
          dev_sq += mult * (an - fd) * (an - fd);
          an_sq += mult * an * an;
        }
      }
    }
    report.m.skipped = skipped;
    report.m.grad_norm = std::sqrt(an_sq);
    report.m.abs_dev = std::sqrt(dev_sq);
    report.m.rel_dev = report.m.abs_dev / std::max(report.m.grad_norm, 1e-300);
  }
  return report;
}

}  // namespace lqo
