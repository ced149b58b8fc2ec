// SPDX-License-Identifier: MIT
#include "lqo/tsia.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "lqo/errors.hpp"
#include "lqo/h2.hpp"
#include "lqo/mateq.hpp"
#include "lqo/opt.hpp"

namespace lqo {

namespace {

void validate_config(const LqoSystem& fom, const TsiaConfig& config) {
  if (config.r < 1 || config.r > fom.n())
    throw std::invalid_argument("tsia: reduced order must satisfy 1 <= r <= n");
  if (!(config.tol > 0.0)) throw std::invalid_argument("tsia: tolerance must be positive");
  if (config.max_iters < 1) throw std::invalid_argument("tsia: max_iters must be at least 1");
  if (config.monitor != TsiaMonitor::tail_tau && !config.compute_fom_norm)
    throw std::invalid_argument("tsia: the eta monitor needs the full-order norm");
  if (config.init) {
    const LqoSystem& init = *config.init;
    if (init.n() != config.r || init.m() != fom.m() || init.p() != fom.p())
      throw std::invalid_argument("tsia: initial reduced model has wrong dimensions");
  }
}

// Orthonormal basis with as many columns as the input. When the input loses
// column rank (the identity-slice seed model produces exactly zero trailing
// columns whenever m < r), the Householder factorization fills the remaining
// directions with its deterministic orthogonal complement; a projection that
// stays degenerate is caught later through the singular W'V check.
Eigen::MatrixXd orth(const Eigen::MatrixXd& x) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  return qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), x.cols());
}

struct SweepSolutions {
  Eigen::MatrixXd x;   // A X + X A_r' + B B_r' = 0
  Eigen::MatrixXd zh;  // A' Zh + Zh A_r - 2 sum_k M_k X M_kr - C' C_r = 0
};

SweepSolutions sweep_solutions(const SylvesterSolver& fom_solver, const LqoSystem& fom,
                               const LqoSystem& rom) {
  SweepSolutions s;
  s.x = fom_solver.solve(rom.a(), fom.b() * rom.b().transpose(), SylvesterKind::forward).x;
  Eigen::MatrixXd rhs = -fom.c().transpose() * rom.c();
  for (Eigen::Index k = 0; k < fom.p(); ++k)
    rhs.noalias() -= 2.0 * (fom.m_quad(k) * s.x * rom.m_quad(k));
  s.zh = fom_solver.solve(rom.a(), rhs, SylvesterKind::adjoint).x;
  return s;
}

// Monitors for a stable iterate: tau from the reduced Gramian and the cross
// solution Z = (Zh + Z1) / 2, eta from tau and the full-order norm.
struct MonitorValues {
  double tau = 0.0;
  std::optional<double> eta;
};

MonitorValues monitor_values(const SylvesterSolver& fom_solver, const LqoSystem& fom,
                             const LqoSystem& rom, const Eigen::MatrixXd& zh,
                             const std::optional<double>& fom_h2_sq) {
  SylvesterSolver rom_solver(rom.a());
  const Eigen::MatrixXd p_r = solve_lyapunov_reach(rom_solver, rom.b()).x;
  Eigen::MatrixXd w = rom.c().transpose() * rom.c();
  for (const auto& mk : rom.m_quad()) w.noalias() += mk * p_r * mk;
  const Eigen::MatrixXd q_r = solve_lyapunov_obsv(rom_solver, 0.5 * (w + w.transpose()).eval()).x;

  const Eigen::MatrixXd z1 =
      fom_solver.solve(rom.a(), (-fom.c().transpose() * rom.c()).eval(), SylvesterKind::adjoint).x;
  const Eigen::MatrixXd z = 0.5 * (zh + z1);

  MonitorValues mv;
  mv.tau = (rom.b().transpose() * q_r * rom.b()).trace() +
           2.0 * (fom.b().transpose() * z * rom.b()).trace();
  if (fom_h2_sq) mv.eta = (*fom_h2_sq + mv.tau) / *fom_h2_sq;
  return mv;
}

LqoSystem shifted_copy(const LqoSystem& rom, double shift) {
  Eigen::MatrixXd a = rom.a();
  a.diagonal().array() -= shift;
  return LqoSystem(a, rom.b(), rom.c(), rom.m_quad());
}

}  // namespace

LqoSystem default_init(Eigen::Index n, Eigen::Index m, Eigen::Index p, Eigen::Index r) {
  if (r < 1 || r > n) throw std::invalid_argument("default_init: need 1 <= r <= n");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const double expo = (r == 1) ? 0.0 : 4.0 * static_cast<double>(i) / static_cast<double>(r - 1);
    a(i, i) = -std::pow(10.0, expo);
  }
  const Eigen::MatrixXd b = Eigen::MatrixXd::Identity(r, m);
  const Eigen::MatrixXd c = Eigen::MatrixXd::Identity(p, r);
  std::vector<Eigen::MatrixXd> ms(p, Eigen::MatrixXd::Identity(r, r));
  return LqoSystem(a, b, c, ms);
}

LqoSystem tsia_step(const LqoSystem& fom, const LqoSystem& rom) {
  SylvesterSolver fom_solver(fom.a());
  if (fom_solver.spectral_abscissa() >= 0.0)
    throw UnstableSystemError("tsia_step: full-order system is not asymptotically stable");
  const SweepSolutions s = sweep_solutions(fom_solver, fom, rom);
  return project(fom, ProjectionPair{orth(s.x), orth(s.zh)});
}

TsiaRun tsia(const LqoSystem& fom, const TsiaConfig& config) {
  validate_config(fom, config);

  SylvesterSolver fom_solver(fom.a());
  if (fom_solver.spectral_abscissa() >= 0.0)
    throw UnstableSystemError("tsia: full-order system is not asymptotically stable");

  std::optional<double> fom_h2_sq;
  if (config.compute_fom_norm) {
    const Eigen::MatrixXd p = solve_lyapunov_reach(fom_solver, fom.b()).x;
    fom_h2_sq =
        (fom.b().transpose() * solve_lyapunov_qo_obsv(fom, p).x * fom.b()).trace();
  }

  LqoSystem rom = config.init ? *config.init : default_init(fom.n(), fom.m(), fom.p(), config.r);
  ProjectionPair projectors{Eigen::MatrixXd::Identity(fom.n(), config.r),
                            Eigen::MatrixXd::Identity(fom.n(), config.r)};

  // Solve the coupling equations for `rom`, retrying once with a small
  // stabilizing diagonal shift when the pencil spectra touch.
  auto coupled = [&](LqoSystem& current) {
    try {
      return sweep_solutions(fom_solver, fom, current);
    } catch (const SpectralOverlapError&) {
      current = shifted_copy(current, 1e-8 * current.a().norm());
      return sweep_solutions(fom_solver, fom, current);
    }
  };

  TsiaRun run{rom, projectors, {}, false, TsiaStopReason::max_iters, fom_h2_sq, {}};
  run.history.reserve(config.max_iters);

  SweepSolutions s;
  try {
    s = coupled(rom);
  } catch (const std::runtime_error& e) {
    run.rom = rom;
    run.reason = TsiaStopReason::solver_failure;
    run.failure_detail = e.what();
    return run;
  }

  double prev_eta = 0.0, prev_tau = 0.0;
  bool have_prev = false;
  std::optional<double> eta_scale, tau_scale;
  int consecutive_unstable = 0;

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const auto t0 = std::chrono::steady_clock::now();
    IterationRecord rec;
    rec.iter = iter;

    try {
      projectors = ProjectionPair{orth(s.x), orth(s.zh)};
      rom = project(fom, projectors);
      s = coupled(rom);
    } catch (const std::runtime_error& e) {
      run.reason = TsiaStopReason::solver_failure;
      run.failure_detail = e.what();
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      run.history.push_back(rec);
      break;
    }

    rec.rom_stable = spectral_abscissa(rom.a()) < 0.0;
    bool stop = false;

    if (rec.rom_stable) {
      consecutive_unstable = 0;
      const MonitorValues mv = monitor_values(fom_solver, fom, rom, s.zh, fom_h2_sq);
      rec.tau = mv.tau;
      rec.eta = mv.eta;

      if (!tau_scale) tau_scale = std::max(std::abs(mv.tau), 1e-300);
      if (mv.eta && !eta_scale) eta_scale = std::max(std::abs(*mv.eta), 1e-300);

      if (have_prev) {
        rec.delta_tau = std::abs(mv.tau - prev_tau) / *tau_scale;
        if (mv.eta) rec.delta_eta = std::abs(*mv.eta - prev_eta) / *eta_scale;
      }
      prev_tau = mv.tau;
      if (mv.eta) prev_eta = *mv.eta;
      have_prev = true;

      if (config.track_fonc) {
        try {
          rec.fonc_measure = fonc_residuals(fom, rom).combined_measure;
        } catch (const std::runtime_error&) {
        }
      }

      if (config.converge_on_absolute_eta && mv.eta &&
          *mv.eta <= *config.converge_on_absolute_eta) {
        stop = true;
      } else {
        const bool eta_ok = rec.delta_eta && *rec.delta_eta <= config.tol;
        const bool tau_ok = rec.delta_tau && *rec.delta_tau <= config.tol;
        switch (config.monitor) {
          case TsiaMonitor::relative_eta: stop = eta_ok; break;
          case TsiaMonitor::tail_tau: stop = tau_ok; break;
          case TsiaMonitor::both: stop = eta_ok && tau_ok; break;
        }
      }
    } else {
      have_prev = false;
      if (++consecutive_unstable > 10) {
        run.reason = TsiaStopReason::solver_failure;
        run.failure_detail = "tsia: reduced model stayed unstable for more than 10 sweeps";
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        run.history.push_back(rec);
        break;
      }
    }

    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    run.history.push_back(rec);

    if (stop) {
      run.converged = true;
      run.reason = TsiaStopReason::converged;
      break;
    }
  }

  run.rom = rom;
  run.projectors = projectors;
  return run;
}

std::optional<double> relative_h2_error_sq(const LqoSystem& fom, const LqoSystem& rom,
                                           double fom_h2_sq) {
  const auto tau = error_tail_term(fom, rom);
  if (!tau) return std::nullopt;
  return (fom_h2_sq + *tau) / fom_h2_sq;
}

std::optional<double> error_tail_term(const LqoSystem& fom, const LqoSystem& rom) {
  if (fom.m() != rom.m() || fom.p() != rom.p())
    throw std::invalid_argument("error_tail_term: systems must share input and output counts");
  SylvesterSolver fom_solver(fom.a());
  if (fom_solver.spectral_abscissa() >= 0.0)
    throw UnstableSystemError("error_tail_term: full-order system is not asymptotically stable");
  if (spectral_abscissa(rom.a()) >= 0.0) return std::nullopt;

  const Eigen::MatrixXd x =
      fom_solver.solve(rom.a(), fom.b() * rom.b().transpose(), SylvesterKind::forward).x;
  Eigen::MatrixXd rhs = -fom.c().transpose() * rom.c();
  for (Eigen::Index k = 0; k < fom.p(); ++k)
    rhs.noalias() -= fom.m_quad(k) * x * rom.m_quad(k);
  const Eigen::MatrixXd z = fom_solver.solve(rom.a(), rhs, SylvesterKind::adjoint).x;

  SylvesterSolver rom_solver(rom.a());
  const Eigen::MatrixXd p_r = solve_lyapunov_reach(rom_solver, rom.b()).x;
  Eigen::MatrixXd w = rom.c().transpose() * rom.c();
  for (const auto& mk : rom.m_quad()) w.noalias() += mk * p_r * mk;
  const Eigen::MatrixXd q_r = solve_lyapunov_obsv(rom_solver, 0.5 * (w + w.transpose()).eval()).x;

  return (rom.b().transpose() * q_r * rom.b()).trace() +
         2.0 * (fom.b().transpose() * z * rom.b()).trace();
}

}  // namespace lqo
