// SPDX-License-Identifier: MIT
//
// lqomor: generate, reduce, evaluate, and sweep model-reduction runs for
// linear systems with quadratic outputs.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lqo/bt.hpp"
#include "lqo/errors.hpp"
#include "lqo/h2.hpp"
#include "lqo/io.hpp"
#include "lqo/models.hpp"
#include "lqo/opt.hpp"
#include "lqo/sim.hpp"
#include "lqo/system.hpp"
#include "lqo/tsia.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitNoConvergence = 4;

double opt_or_nan(const std::optional<double>& v) { return v ? *v : kNan; }

json json_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

std::string stop_reason_name(lqo::TsiaStopReason reason) {
  switch (reason) {
    case lqo::TsiaStopReason::converged: return "converged";
    case lqo::TsiaStopReason::max_iters: return "max_iters";
    case lqo::TsiaStopReason::solver_failure: return "solver_failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// generate

struct GenerateAdvdiffOpts {
  long n = 300;
  double alpha = 0.01;
  double beta = 1.0;
  std::string out;
};

struct GenerateRandomOpts {
  long n = 8;
  long m = 1;
  long p = 1;
  std::uint64_t seed = 0;
  double gap = 0.5;
  std::string out;
};

void report_generated(const lqo::LqoSystem& sys, const fs::path& out) {
  const lqo::ValidationReport report = lqo::validate(sys, true);
  std::cout << "wrote " << out.string() << ": n=" << sys.n() << " m=" << sys.m()
            << " p=" << sys.p() << " stable=" << (report.stable.value_or(false) ? "yes" : "no")
            << "\n";
}

int run_generate_advdiff(const GenerateAdvdiffOpts& opt) {
  lqo::AdvectionDiffusionConfig config;
  config.n = opt.n;
  config.alpha = opt.alpha;
  config.beta = opt.beta;
  const lqo::AdvectionDiffusionModel model = lqo::build_advection_diffusion(config);

  json metadata = {{"model", "advdiff"},
                   {"n", opt.n},
                   {"alpha", opt.alpha},
                   {"beta", opt.beta},
                   {"cost_offset", model.cost_offset}};
  lqo::save_bundle(model.system, opt.out, metadata);
  report_generated(model.system, opt.out);
  return kExitOk;
}

int run_generate_random(const GenerateRandomOpts& opt) {
  const lqo::LqoSystem sys = lqo::random_stable_lqo(opt.n, opt.m, opt.p, opt.seed, opt.gap);
  json metadata = {{"model", "random"}, {"n", opt.n},     {"m", opt.m},
                   {"p", opt.p},        {"seed", opt.seed}, {"gap", opt.gap}};
  lqo::save_bundle(sys, opt.out, metadata);
  report_generated(sys, opt.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// reduce

struct ReduceOpts {
  std::string bundle;
  std::string method = "tsia";
  long r = 1;
  double tol = 1e-10;
  int max_iters = 500;
  std::string monitor = "eta";
  bool track_fonc = false;
  std::string out;
};

lqo::TsiaMonitor parse_monitor(const std::string& name) {
  if (name == "eta") return lqo::TsiaMonitor::relative_eta;
  if (name == "tau") return lqo::TsiaMonitor::tail_tau;
  return lqo::TsiaMonitor::both;
}

void write_history_csv(const fs::path& path, const std::vector<lqo::IterationRecord>& history) {
  std::vector<std::vector<double>> rows;
  rows.reserve(history.size());
  for (const auto& rec : history) {
    rows.push_back({static_cast<double>(rec.iter), opt_or_nan(rec.eta), opt_or_nan(rec.tau),
                    opt_or_nan(rec.delta_eta), opt_or_nan(rec.delta_tau),
                    rec.rom_stable ? 1.0 : 0.0, opt_or_nan(rec.fonc_measure), rec.seconds});
  }
  lqo::write_csv(path,
                 {"iter", "eta", "tau", "delta_eta", "delta_tau", "rom_stable", "fonc_measure",
                  "seconds"},
                 rows);
}

int run_reduce(const ReduceOpts& opt) {
  const lqo::SystemBundle fom = lqo::load_bundle(opt.bundle);
  if (opt.r < 1 || opt.r >= fom.system.n())
    throw CLI::ValidationError("--r", "reduced order must satisfy 1 <= r < n");

  fs::create_directories(opt.out);

  if (opt.method == "bt") {
    const lqo::BalancedReduction red = lqo::balanced_truncation(fom.system, opt.r);
    lqo::save_bundle(red.rom, fs::path(opt.out) / "rom",
                     json{{"method", "bt"}, {"r", opt.r}, {"source", opt.bundle}});

    std::vector<std::vector<double>> rows;
    for (Eigen::Index i = 0; i < red.hankel_like_values.size(); ++i)
      rows.push_back({static_cast<double>(i + 1), red.hankel_like_values(i)});
    lqo::write_csv(fs::path(opt.out) / "hankel.csv", {"index", "sigma"}, rows);

    write_json(fs::path(opt.out) / "report.json",
               json{{"method", "bt"},
                    {"r", opt.r},
                    {"rom_stable", red.rom_stable},
                    {"sigma_head", red.hankel_like_values(0)},
                    {"sigma_cut", red.hankel_like_values(opt.r - 1)}});
    std::cout << "bt: wrote order-" << opt.r << " model to " << opt.out
              << " (stable=" << (red.rom_stable ? "yes" : "no") << ")\n";
    return kExitOk;
  }

  lqo::TsiaConfig config;
  config.r = opt.r;
  config.tol = opt.tol;
  config.max_iters = opt.max_iters;
  config.monitor = parse_monitor(opt.monitor);
  config.track_fonc = opt.track_fonc;
  const lqo::TsiaRun run = lqo::tsia(fom.system, config);

  lqo::save_bundle(run.rom, fs::path(opt.out) / "rom",
                   json{{"method", "tsia"}, {"r", opt.r}, {"source", opt.bundle}});
  write_history_csv(fs::path(opt.out) / "history.csv", run.history);

  std::optional<double> final_eta, final_tau;
  for (auto it = run.history.rbegin(); it != run.history.rend(); ++it) {
    if (it->eta || it->tau) {
      final_eta = it->eta;
      final_tau = it->tau;
      break;
    }
  }
  write_json(fs::path(opt.out) / "report.json",
             json{{"method", "tsia"},
                  {"r", opt.r},
                  {"tol", opt.tol},
                  {"monitor", opt.monitor},
                  {"iterations", run.history.size()},
                  {"converged", run.converged},
                  {"stop_reason", stop_reason_name(run.reason)},
                  {"failure_detail", run.failure_detail},
                  {"fom_h2_sq", json_or_null(run.fom_h2_sq)},
                  {"final_eta", json_or_null(final_eta)},
                  {"final_tau", json_or_null(final_tau)}});

  std::cout << "tsia: " << run.history.size() << " sweeps, " << stop_reason_name(run.reason);
  if (final_eta) std::cout << ", eta=" << *final_eta;
  std::cout << "\n";

  if (run.reason == lqo::TsiaStopReason::solver_failure) {
    std::cerr << "error: " << run.failure_detail << "\n";
    return kExitSolver;
  }
  return run.converged ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOpts {
  std::string fom;
  std::string rom_tsia;
  std::string rom_bt;
  std::string input = "sinusoid";
  double amplitude = 0.5;
  double omega = 3.14159265358979323846;
  double offset = 1.0;
  double decay = 5.0;
  long channel = -1;  // -1 picks the last input channel
  double t_final = 10.0;
  double dt = 1e-3;
  std::string out;
};

lqo::InputSignal build_input(const EvaluateOpts& opt, Eigen::Index m) {
  lqo::SignalSpec active;
  if (opt.input == "zero") active = lqo::SignalSpec::zero();
  else if (opt.input == "step") active = lqo::SignalSpec::step(opt.amplitude);
  else if (opt.input == "sinusoid")
    active = lqo::SignalSpec::sinusoid(opt.amplitude, opt.omega, opt.offset);
  else active = lqo::SignalSpec::damped_poly(opt.amplitude, opt.decay);

  const Eigen::Index channel = (opt.channel < 0) ? m - 1 : opt.channel;
  if (channel >= m) throw CLI::ValidationError("--channel", "channel index exceeds input count");

  lqo::InputSignal input;
  input.channels.assign(m, lqo::SignalSpec::zero());
  input.channels[static_cast<size_t>(channel)] = active;
  return input;
}

struct RomEvaluation {
  std::string label;
  lqo::SimResult sim;
  lqo::OutputErrorMetrics err;
  std::optional<double> eta;
  std::optional<double> error_sq;  // absolute squared H2 error
  std::optional<double> fonc;
  std::optional<bool> bound_holds;
  double bound_lhs = 0.0;
  std::optional<double> bound_rhs;
};

int run_evaluate(const EvaluateOpts& opt) {
  if (opt.rom_tsia.empty() && opt.rom_bt.empty())
    throw CLI::ValidationError("--rom-tsia/--rom-bt", "need at least one reduced model");

  const lqo::SystemBundle fom = lqo::load_bundle(opt.fom);
  const lqo::InputSignal input = build_input(opt, fom.system.m());
  const lqo::SimResult fom_sim = lqo::simulate(fom.system, input, opt.t_final, opt.dt);
  const lqo::InputNorms norms = lqo::input_l2_norms(input, opt.t_final, opt.dt);
  const double fom_h2_sq = lqo::h2_norm_sq(fom.system);

  std::vector<RomEvaluation> evals;
  auto evaluate_rom = [&](const std::string& label, const std::string& dir) {
    const lqo::SystemBundle rom = lqo::load_bundle(dir);
    if (rom.system.m() != fom.system.m() || rom.system.p() != fom.system.p())
      throw std::invalid_argument("evaluate: reduced model " + dir +
                                  " does not match the full model's input/output counts");
    RomEvaluation ev;
    ev.label = label;
    ev.sim = lqo::simulate(rom.system, input, opt.t_final, opt.dt);
    ev.err = lqo::output_error_metrics(fom_sim, ev.sim);
    ev.eta = lqo::relative_h2_error_sq(fom.system, rom.system, fom_h2_sq);
    if (ev.eta) ev.error_sq = *ev.eta * fom_h2_sq;
    try {
      ev.fonc = lqo::fonc_residuals(fom.system, rom.system).combined_measure;
    } catch (const lqo::UnstableSystemError&) {
    }

    double lhs = 0.0;
    for (Eigen::Index k = 0; k < fom_sim.times.size(); ++k) {
      const double e = (fom_sim.y.col(k) - ev.sim.y.col(k)).lpNorm<Eigen::Infinity>();
      lhs = std::max(lhs, e * e);
    }
    ev.bound_lhs = lhs;
    if (ev.error_sq) {
      ev.bound_rhs = std::max(*ev.error_sq, 0.0) *
                     (norms.l2 * norms.l2 + norms.kron_l2 * norms.kron_l2);
      ev.bound_holds = lhs <= *ev.bound_rhs;
    }
    evals.push_back(std::move(ev));
  };

  if (!opt.rom_tsia.empty()) evaluate_rom("tsia", opt.rom_tsia);
  if (!opt.rom_bt.empty()) evaluate_rom("bt", opt.rom_bt);

  fs::create_directories(opt.out);

  // Per-channel output columns plus one sup-normalized error column per model.
  const Eigen::Index p = fom.system.p();
  double y_scale = 0.0;
  for (Eigen::Index k = 0; k < fom_sim.times.size(); ++k)
    y_scale = std::max(y_scale, fom_sim.y.col(k).lpNorm<Eigen::Infinity>());
  y_scale = std::max(y_scale, 1e-300);

  std::vector<std::string> header{"t"};
  auto channel_name = [&](const std::string& base, Eigen::Index k) {
    return p == 1 ? base : base + std::to_string(k);
  };
  for (Eigen::Index k = 0; k < p; ++k) header.push_back(channel_name("y", k));
  for (const auto& ev : evals)
    for (Eigen::Index k = 0; k < p; ++k) header.push_back(channel_name("y_" + ev.label, k));
  for (const auto& ev : evals) header.push_back("relerr_" + ev.label);

  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<size_t>(fom_sim.times.size()));
  for (Eigen::Index k = 0; k < fom_sim.times.size(); ++k) {
    std::vector<double> row{fom_sim.times(k)};
    for (Eigen::Index j = 0; j < p; ++j) row.push_back(fom_sim.y(j, k));
    for (const auto& ev : evals)
      for (Eigen::Index j = 0; j < p; ++j) row.push_back(ev.sim.y(j, k));
    for (const auto& ev : evals)
      row.push_back((fom_sim.y.col(k) - ev.sim.y.col(k)).lpNorm<Eigen::Infinity>() / y_scale);
    rows.push_back(std::move(row));
  }
  lqo::write_csv(fs::path(opt.out) / "sim.csv", header, rows);

  json report;
  report["input"] = {{"kind", opt.input},     {"amplitude", opt.amplitude},
                     {"omega", opt.omega},    {"offset", opt.offset},
                     {"decay", opt.decay},    {"t_final", opt.t_final},
                     {"dt", opt.dt},          {"l2", norms.l2},
                     {"kron_l2", norms.kron_l2}};
  report["fom"] = {{"bundle", opt.fom}, {"h2_norm_sq", fom_h2_sq}};
  report["roms"] = json::array();
  bool all_bounds_hold = true;
  for (const auto& ev : evals) {
    json r = {{"label", ev.label},
              {"relative_h2_error_sq", json_or_null(ev.eta)},
              {"h2_error_sq", json_or_null(ev.error_sq)},
              {"fonc_combined_measure", json_or_null(ev.fonc)},
              {"sup_output_error", ev.err.sup_abs_error},
              {"sup_output_error_relative", ev.err.relative},
              {"bound_lhs", ev.bound_lhs},
              {"bound_rhs", json_or_null(ev.bound_rhs)}};
    r["bound_holds"] = ev.bound_holds ? json(*ev.bound_holds) : json(nullptr);
    if (ev.bound_holds && !*ev.bound_holds) all_bounds_hold = false;
    report["roms"].push_back(std::move(r));
  }
  write_json(fs::path(opt.out) / "report.json", report);

  for (const auto& ev : evals) {
    std::cout << ev.label << ": sup|y-y_r|=" << ev.err.sup_abs_error;
    if (ev.eta) std::cout << ", eta=" << *ev.eta;
    if (ev.bound_holds) std::cout << ", bound=" << (*ev.bound_holds ? "holds" : "VIOLATED");
    std::cout << "\n";
  }
  return all_bounds_hold ? kExitOk : kExitSolver;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
  std::string bundle;
  long r_min = 2;
  long r_max = 30;
  long r_step = 2;
  double tol = 1e-10;
  int max_iters = 500;
  std::string monitor = "eta";
  std::string out;
};

struct SweepRow {
  long r = 0;
  std::optional<double> eta_tsia, eta_bt;
  bool tsia_converged = false;
  lqo::TsiaStopReason tsia_reason = lqo::TsiaStopReason::max_iters;
  size_t tsia_iters = 0;
  bool tsia_stable = false;
  bool bt_stable = false;
  std::string failure;
};

int thread_budget() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LQO_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) return static_cast<int>(std::min<long>(parsed, hw));
  }
  return static_cast<int>(hw);
}

int run_sweep(const SweepOpts& opt) {
  if (opt.r_min < 1 || opt.r_max < opt.r_min || opt.r_step < 1)
    throw CLI::ValidationError("--r-min/--r-max/--r-step", "need 1 <= r-min <= r-max, step >= 1");

  const lqo::SystemBundle fom = lqo::load_bundle(opt.bundle);
  if (opt.r_max >= fom.system.n())
    throw CLI::ValidationError("--r-max", "reduced order must stay below n");

  fs::create_directories(opt.out);
  const double fom_h2_sq = lqo::h2_norm_sq(fom.system);
  const lqo::BtFactorization bt(fom.system);

  std::vector<long> orders;
  for (long r = opt.r_min; r <= opt.r_max; r += opt.r_step) orders.push_back(r);

  auto one_order = [&](long r) {
    SweepRow row;
    row.r = r;
    try {
      lqo::TsiaConfig config;
      config.r = r;
      config.tol = opt.tol;
      config.max_iters = opt.max_iters;
      config.monitor = parse_monitor(opt.monitor);
      const lqo::TsiaRun run = lqo::tsia(fom.system, config);
      row.tsia_converged = run.converged;
      row.tsia_reason = run.reason;
      row.tsia_iters = run.history.size();
      row.tsia_stable = lqo::spectral_abscissa(run.rom.a()) < 0.0;
      row.eta_tsia = lqo::relative_h2_error_sq(fom.system, run.rom, fom_h2_sq);
      if (run.reason == lqo::TsiaStopReason::solver_failure) row.failure = run.failure_detail;
      lqo::save_bundle(run.rom, fs::path(opt.out) / ("tsia_r" + std::to_string(r)),
                       json{{"method", "tsia"}, {"r", r}});

      const lqo::BalancedReduction red = bt.truncate(r);
      row.bt_stable = red.rom_stable;
      row.eta_bt = lqo::relative_h2_error_sq(fom.system, red.rom, fom_h2_sq);
      lqo::save_bundle(red.rom, fs::path(opt.out) / ("bt_r" + std::to_string(r)),
                       json{{"method", "bt"}, {"r", r}});
    } catch (const std::exception& e) {
      row.failure = e.what();
    }
    return row;
  };

  std::vector<SweepRow> results(orders.size(), SweepRow{});
  const int budget = thread_budget();
  for (size_t base = 0; base < orders.size(); base += static_cast<size_t>(budget)) {
    const size_t end = std::min(orders.size(), base + static_cast<size_t>(budget));
    std::vector<std::future<SweepRow>> batch;
    for (size_t i = base; i < end; ++i)
      batch.push_back(std::async(std::launch::async, one_order, orders[i]));
    for (size_t i = base; i < end; ++i) results[i] = batch[i - base].get();
  }

  std::vector<std::vector<double>> rows;
  json per_r = json::array();
  bool failed = false;
  for (const auto& row : results) {
    rows.push_back({static_cast<double>(row.r), opt_or_nan(row.eta_tsia), opt_or_nan(row.eta_bt),
                    row.tsia_converged ? 1.0 : 0.0, static_cast<double>(row.tsia_iters),
                    row.tsia_stable ? 1.0 : 0.0, row.bt_stable ? 1.0 : 0.0});
    per_r.push_back(json{{"r", row.r},
                         {"eta_tsia", json_or_null(row.eta_tsia)},
                         {"eta_bt", json_or_null(row.eta_bt)},
                         {"tsia_converged", row.tsia_converged},
                         {"tsia_stop_reason", stop_reason_name(row.tsia_reason)},
                         {"tsia_iterations", row.tsia_iters},
                         {"failure", row.failure}});
    if (!row.failure.empty() || row.tsia_reason == lqo::TsiaStopReason::solver_failure)
      failed = true;
  }
  lqo::write_csv(fs::path(opt.out) / "summary.csv",
                 {"r", "eta_tsia", "eta_bt", "tsia_converged", "tsia_iters", "tsia_stable",
                  "bt_stable"},
                 rows);
  write_json(fs::path(opt.out) / "report.json",
             json{{"bundle", opt.bundle}, {"fom_h2_sq", fom_h2_sq}, {"runs", per_r}});

  for (const auto& row : results) {
    std::cout << "r=" << row.r << ": eta_tsia=" << opt_or_nan(row.eta_tsia)
              << " eta_bt=" << opt_or_nan(row.eta_bt);
    if (!row.failure.empty()) std::cout << " FAILED: " << row.failure;
    std::cout << "\n";
  }
  return failed ? kExitSolver : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model reduction for linear systems with quadratic outputs"};
  app.require_subcommand(1);

  GenerateAdvdiffOpts gen_advdiff;
  GenerateRandomOpts gen_random;
  ReduceOpts reduce;
  EvaluateOpts evaluate;
  SweepOpts sweep;

  auto* generate = app.add_subcommand("generate", "Write a system bundle to disk");
  generate->require_subcommand(1);
  auto* advdiff = generate->add_subcommand("advdiff", "Boundary-controlled advection-diffusion");
  advdiff->add_option("--n", gen_advdiff.n, "Grid size");
  advdiff->add_option("--alpha", gen_advdiff.alpha, "Diffusion coefficient");
  advdiff->add_option("--beta", gen_advdiff.beta, "Advection speed");
  advdiff->add_option("--out", gen_advdiff.out, "Bundle directory")->required();
  auto* random = generate->add_subcommand("random", "Seeded dense stable system");
  random->add_option("--n", gen_random.n, "State dimension");
  random->add_option("--m", gen_random.m, "Input count");
  random->add_option("--p", gen_random.p, "Output count");
  random->add_option("--seed", gen_random.seed, "RNG seed")->required();
  random->add_option("--gap", gen_random.gap, "Stability margin");
  random->add_option("--out", gen_random.out, "Bundle directory")->required();

  auto* red = app.add_subcommand("reduce", "Reduce a bundle with tsia or bt");
  red->add_option("--bundle", reduce.bundle, "Full-model bundle directory")->required();
  red->add_option("--method", reduce.method, "Reduction method")
      ->check(CLI::IsMember({"tsia", "bt"}));
  red->add_option("--r", reduce.r, "Reduced order")->required();
  red->add_option("--tol", reduce.tol, "Stagnation tolerance");
  red->add_option("--max-iters", reduce.max_iters, "Sweep budget");
  red->add_option("--monitor", reduce.monitor, "Convergence monitor")
      ->check(CLI::IsMember({"eta", "tau", "both"}));
  red->add_flag("--track-fonc", reduce.track_fonc, "Record the stationarity measure per sweep");
  red->add_option("--out", reduce.out, "Report directory")->required();

  auto* eval = app.add_subcommand("evaluate", "Simulate and compare reduced models");
  eval->add_option("--fom", evaluate.fom, "Full-model bundle directory")->required();
  eval->add_option("--rom-tsia", evaluate.rom_tsia, "TSIA reduced bundle directory");
  eval->add_option("--rom-bt", evaluate.rom_bt, "BT reduced bundle directory");
  eval->add_option("--input", evaluate.input, "Input signal shape")
      ->check(CLI::IsMember({"sinusoid", "damped", "step", "zero"}));
  eval->add_option("--amplitude", evaluate.amplitude, "Signal amplitude");
  eval->add_option("--omega", evaluate.omega, "Sinusoid angular frequency");
  eval->add_option("--offset", evaluate.offset, "Sinusoid offset");
  eval->add_option("--decay", evaluate.decay, "Damped-signal time constant");
  eval->add_option("--channel", evaluate.channel, "Driven input channel (default: last)");
  eval->add_option("--t-final", evaluate.t_final, "Horizon");
  eval->add_option("--dt", evaluate.dt, "Time step");
  eval->add_option("--out", evaluate.out, "Report directory")->required();

  auto* sw = app.add_subcommand("sweep", "Run tsia and bt across a range of orders");
  sw->add_option("--bundle", sweep.bundle, "Full-model bundle directory")->required();
  sw->add_option("--r-min", sweep.r_min, "Smallest order")->required();
  sw->add_option("--r-max", sweep.r_max, "Largest order")->required();
  sw->add_option("--r-step", sweep.r_step, "Order increment");
  sw->add_option("--tol", sweep.tol, "Stagnation tolerance");
  sw->add_option("--max-iters", sweep.max_iters, "Sweep budget per order");
  sw->add_option("--monitor", sweep.monitor, "Convergence monitor")
      ->check(CLI::IsMember({"eta", "tau", "both"}));
  sw->add_option("--out", sweep.out, "Report directory")->required();

  try {
    app.parse(argc, argv);
    if (advdiff->parsed()) return run_generate_advdiff(gen_advdiff);
    if (random->parsed()) return run_generate_random(gen_random);
    if (red->parsed()) return run_reduce(reduce);
    if (eval->parsed()) return run_evaluate(evaluate);
    if (sw->parsed()) return run_sweep(sweep);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const lqo::BundleFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
