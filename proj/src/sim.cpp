// SPDX-License-Identifier: MIT
#include "lqo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lqo {

double SignalSpec::eval(double t) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::step: return amplitude;
    case Kind::sinusoid: return amplitude * std::cos(omega * t) + offset;
    case Kind::damped_poly: return amplitude * t * t * std::exp(-t / decay);
    case Kind::samples: {
      if (sample_times.empty()) return 0.0;
      if (t <= sample_times.front()) return sample_values.front();
      if (t >= sample_times.back()) return sample_values.back();
      const auto it = std::upper_bound(sample_times.begin(), sample_times.end(), t);
      const size_t hi = static_cast<size_t>(it - sample_times.begin());
      const double t0 = sample_times[hi - 1], t1 = sample_times[hi];
      const double w = (t - t0) / (t1 - t0);
      return (1.0 - w) * sample_values[hi - 1] + w * sample_values[hi];
    }
  }
  return 0.0;
}

SignalSpec SignalSpec::zero() { return SignalSpec{}; }

SignalSpec SignalSpec::step(double amplitude) {
  SignalSpec s;
  s.kind = Kind::step;
  s.amplitude = amplitude;
  return s;
}

SignalSpec SignalSpec::sinusoid(double amplitude, double omega, double offset) {
  SignalSpec s;
  s.kind = Kind::sinusoid;
  s.amplitude = amplitude;
  s.omega = omega;
  s.offset = offset;
  return s;
}

SignalSpec SignalSpec::damped_poly(double amplitude, double decay) {
  if (!(decay > 0.0)) throw std::invalid_argument("damped_poly: decay must be positive");
  SignalSpec s;
  s.kind = Kind::damped_poly;
  s.amplitude = amplitude;
  s.decay = decay;
  return s;
}

SignalSpec SignalSpec::samples(std::vector<double> times, std::vector<double> values) {
  if (times.size() != values.size() || times.empty())
    throw std::invalid_argument("samples: need matching, nonempty time and value lists");
  if (!std::is_sorted(times.begin(), times.end()))
    throw std::invalid_argument("samples: times must be sorted");
  SignalSpec s;
  s.kind = Kind::samples;
  s.sample_times = std::move(times);
  s.sample_values = std::move(values);
  return s;
}

Eigen::VectorXd InputSignal::at(double t) const {
  Eigen::VectorXd u(static_cast<Eigen::Index>(channels.size()));
  for (size_t i = 0; i < channels.size(); ++i)
    u(static_cast<Eigen::Index>(i)) = channels[i].eval(t);
  return u;
}

SimResult simulate(const LqoSystem& sys, const InputSignal& input, double t_final, double dt) {
  if (static_cast<Eigen::Index>(input.channels.size()) != sys.m())
    throw std::invalid_argument("simulate: input channel count must match the system");
  if (!(t_final > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("simulate: horizon and step must be positive");

  const Eigen::Index n = sys.n(), p = sys.p();
  const long steps = std::max<long>(1, std::lround(t_final / dt));
  const double h = t_final / static_cast<double>(steps);

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(eye - (h / 2.0) * sys.a());
  const Eigen::MatrixXd rhs_mat = eye + (h / 2.0) * sys.a();

  SimResult res;
  res.times.resize(steps + 1);
  res.y.resize(p, steps + 1);
  res.y_lin.resize(p, steps + 1);
  res.y_quad.resize(p, steps + 1);
  res.x_norms.resize(steps + 1);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  auto record = [&](long k, double t) {
    res.times(k) = t;
    res.x_norms(k) = x.norm();
    res.y_lin.col(k) = sys.c() * x;
    for (Eigen::Index j = 0; j < p; ++j) res.y_quad(j, k) = x.dot(sys.m_quad(j) * x);
    res.y.col(k) = res.y_lin.col(k) + res.y_quad.col(k);
  };
  record(0, 0.0);

  Eigen::VectorXd u_now = input.at(0.0);
  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k) * h;
    const Eigen::VectorXd u_next = input.at(t);
    x = lu.solve(rhs_mat * x + (h / 2.0) * (sys.b() * (u_now + u_next)));
    u_now = u_next;
    record(k, t);
  }
  return res;
}

OutputErrorMetrics output_error_metrics(const SimResult& full, const SimResult& reduced) {
  if (full.times.size() != reduced.times.size() || full.y.rows() != reduced.y.rows())
    throw std::invalid_argument("output_error_metrics: results live on different grids");
  if ((full.times - reduced.times).lpNorm<Eigen::Infinity>() > 1e-12)
    throw std::invalid_argument("output_error_metrics: results live on different grids");

  OutputErrorMetrics m;
  double y_scale = 0.0;
  for (Eigen::Index k = 0; k < full.times.size(); ++k) {
    m.sup_abs_error = std::max(
        m.sup_abs_error, (full.y.col(k) - reduced.y.col(k)).lpNorm<Eigen::Infinity>());
    y_scale = std::max(y_scale, full.y.col(k).lpNorm<Eigen::Infinity>());
  }
  m.relative = m.sup_abs_error / std::max(y_scale, 1e-300);
  return m;
}

InputNorms input_l2_norms(const InputSignal& input, double t_final, double dt) {
  if (!(t_final > 0.0) || !(dt > 0.0))
    throw std::invalid_argument("input_l2_norms: horizon and step must be positive");
  const long steps = std::max<long>(1, std::lround(t_final / dt));
  const double h = t_final / static_cast<double>(steps);

  double sq = 0.0, quart = 0.0;
  for (long k = 0; k <= steps; ++k) {
    const double w = (k == 0 || k == steps) ? 0.5 * h : h;
    const double usq = input.at(static_cast<double>(k) * h).squaredNorm();
    sq += w * usq;
    quart += w * usq * usq;
  }
  return InputNorms{std::sqrt(sq), std::sqrt(quart)};
}

}  // namespace lqo
