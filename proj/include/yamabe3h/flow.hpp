#pragma once

// Extended combinatorial Yamabe flow dr_i/dt = -K~_i sinh r_i, its
// diagnostics, and solvers for flat packings.

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "yamabe3h/complex.hpp"

namespace yamabe3h {

enum class StepMethod { Rk4, AdaptiveDopri5 };

struct FlowConfig {
  StepMethod method = StepMethod::Rk4;
  // Fixed step for Rk4, initial step for the adaptive pair.
  double dt = 1e-3;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double t_max = 100.0;
  // Converged once ||K~||_inf < stop_tol.
  double stop_tol = 1e-10;
  // Record every n-th accepted step; the first and last states always are.
  std::size_t output_stride = 10;
  bool record_energy = true;
  bool detect_decay = true;
  // Retry a step once at half size when some tetrahedron changes class.
  bool refine_at_boundary = true;
  double decay_threshold = 1e-6;
  std::size_t decay_window = 50;

  // Throws DomainError on dt <= 0, tolerances outside (0, 1), t_max <= 0.
  void validate() const;
};

enum class FlowStatus { ConvergedToFlat, DecayedToZero, TMaxReached, NumericFailure };

std::string_view to_string(FlowStatus s);

struct FlowSample {
  double t = 0.0;
  std::vector<double> r;
  std::vector<double> k;
  // NaN when energies are not recorded.
  double s_rel = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  // Lowest vertex index on ties.
  int argmin = 0;
  int argmax = 0;
  std::size_t virtual_count = 0;
};

struct FlowTrace {
  std::vector<FlowSample> samples;
  FlowStatus status = FlowStatus::TMaxReached;
  std::string message;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  // Accepted steps across which some tetrahedron changed real/virtual class.
  std::size_t class_changes = 0;

  const FlowSample& back() const { return samples.back(); }
};

// (-K~_i sinh r_i)_i.
std::vector<double> rhs(const Complex& c, const Packing& r);

// Never throws on numeric trouble during integration; that ends the trace
// with NumericFailure. Throws DomainError on invalid inputs.
FlowTrace integrate(const Complex& c, const Packing& r0, const FlowConfig& cfg);

// Header t,r_0..,K_0..,S_rel,r_min,r_max,virtual_count; 17 significant
// digits.
void write_csv(std::ostream& os, const FlowTrace& trace);

// Least-squares slope of log(values) against times, negated.
double fitted_decay_rate(std::span<const double> times, std::span<const double> values);

// Decay rate of ln tanh(r_M/2) for decaying traces, of ||K~||_inf otherwise.
double fitted_trace_rate(const FlowTrace& trace);

nlohmann::json summary_json(const FlowTrace& trace);

struct DecayBoundReport {
  double epsilon = 0.0;
  bool holds = true;
  std::size_t violations = 0;
  // max over samples of tanh(r_M(t)/2) / (tanh(r_M(0)/2) e^{-eps t}).
  double max_ratio = 0.0;
  double fitted_rate = 0.0;
};

// tanh(r_M(t)/2) <= tanh(r_M(0)/2) exp(-eps t) with eps = 4 pi - d_max
// alpha_E. Throws HypothesisError if d_max > 22.
DecayBoundReport decay_bound_check(const FlowTrace& trace, int d_max);

struct LowerBoundReport {
  // Radius with regular_solid_angle(C) = 4 pi / 23.
  double c = 0.0;
  double bound = 0.0;
  bool holds = true;
  std::size_t violations = 0;
  double min_observed = 0.0;
};

// min_i r_i(t) >= min(min_i r_i(0), C). Throws HypothesisError if d_min < 23.
LowerBoundReport lower_bound_check(const FlowTrace& trace, int d_min);

struct UpperBoundReport {
  // Samples where every angle at the max-radius vertex is <= 2 pi / d_max.
  std::size_t triggered = 0;
  // Of those, samples where r_max would still increase (K~ < 0 there).
  std::size_t violations = 0;
};

UpperBoundReport upper_bound_check(const Complex& c, const FlowTrace& trace);

// Unique t0 with regular_solid_angle(t0) = 4 pi / d, by bisection on
// [1e-8, 50]. Throws NoSolutionError for d <= 22, DomainError for d < 1.
double solve_regular(int d);

// Damped Newton on S_rel until ||K~||_inf < tol. Every tetrahedron must stay
// real; throws NumericError when no admissible damped step exists.
Packing newton_refine(const Complex& c, const Packing& r, double tol,
                      int max_iterations = 50);

struct SpectrumReport {
  // Ascending eigenvalues of -diag(sqrt sinh r) dK/dr diag(sqrt sinh r).
  std::vector<double> eigenvalues;
  // |largest eigenvalue|: the exponential convergence rate.
  double rate = 0.0;
  double asymmetry = 0.0;
  bool stable = false;
};

// Requires a flat (||K~||_inf < 1e-8), fully real packing.
SpectrumReport stability_spectrum(const Complex& c, const Packing& r_star);

}  // namespace yamabe3h
