// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "lqo/system.hpp"

namespace lqo {

// Scalar input channel described in closed form or by samples.
struct SignalSpec {
  enum class Kind { zero, step, sinusoid, damped_poly, samples };

  Kind kind = Kind::zero;
  double amplitude = 1.0;
  double omega = 0.0;
  double offset = 0.0;
  double decay = 5.0;  // damped_poly evaluates amplitude * t^2 * exp(-t / decay)
  std::vector<double> sample_times;
  std::vector<double> sample_values;

  double eval(double t) const;

  static SignalSpec zero();
  static SignalSpec step(double amplitude);
  static SignalSpec sinusoid(double amplitude, double omega, double offset);
  static SignalSpec damped_poly(double amplitude, double decay);
  static SignalSpec samples(std::vector<double> times, std::vector<double> values);
};

struct InputSignal {
  std::vector<SignalSpec> channels;
  Eigen::VectorXd at(double t) const;
};

struct SimResult {
  Eigen::VectorXd times;
  Eigen::MatrixXd y;       // p x (steps + 1), linear plus quadratic output
  Eigen::MatrixXd y_lin;   // C x part
  Eigen::MatrixXd y_quad;  // x' M_k x part
  Eigen::VectorXd x_norms;
};

// Crank-Nicolson time stepping on a uniform grid; one LU factorization of
// (I - dt/2 A) covers the whole run.
SimResult simulate(const LqoSystem& sys, const InputSignal& input, double t_final, double dt);

struct OutputErrorMetrics {
  double sup_abs_error = 0.0;  // sup over the grid of ||y(t) - y_r(t)||_inf
  double relative = 0.0;       // normalized by sup over the grid of ||y(t)||_inf
};

OutputErrorMetrics output_error_metrics(const SimResult& full, const SimResult& reduced);

struct InputNorms {
  double l2 = 0.0;       // L2 norm of u over [0, t_final]
  double kron_l2 = 0.0;  // L2 norm of the Kronecker square, the L4 energy of u
};

InputNorms input_l2_norms(const InputSignal& input, double t_final, double dt);

}  // namespace lqo
