#include "yamabe3h/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "yamabe3h/energy.hpp"
#include "yamabe3h/errors.hpp"

namespace yamabe3h {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

constexpr int kMaxHalvings = 60;
constexpr double kFlatForSpectrum = 1e-8;

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool admissible(const State& x) {
  const RadiusBounds bounds;
  return std::all_of(x.begin(), x.end(), [&](double v) {
    return std::isfinite(v) && v >= bounds.min && v <= bounds.max;
  });
}

// Real/virtual pattern of every tetrahedron; compared across a step to spot
// crossings of the boundary of the real region.
std::vector<bool> real_pattern(const Complex& c, const State& x) {
  const Packing r(x);
  std::vector<bool> out(c.tetrahedron_count());
  for (std::size_t t = 0; t < c.tetrahedron_count(); ++t)
    out[t] = q_value(c.tetra_radii(t, r)) > 0.0;
  return out;
}

struct FlowSystem {
  const Complex* complex;
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    dxdt = rhs(*complex, Packing(x));
  }
};

FlowSample make_sample(const Complex& c, double t, const State& x,
                       const std::vector<double>& k, bool with_energy) {
  FlowSample s;
  s.t = t;
  s.r = x;
  s.k = k;
  const auto mn = std::min_element(x.begin(), x.end());
  const auto mx = std::max_element(x.begin(), x.end());
  s.r_min = *mn;
  s.r_max = *mx;
  s.argmin = static_cast<int>(mn - x.begin());
  s.argmax = static_cast<int>(mx - x.begin());
  const Packing r(x);
  for (std::size_t n = 0; n < c.tetrahedron_count(); ++n)
    s.virtual_count += q_value(c.tetra_radii(n, r)) <= 0.0;
  s.s_rel = with_energy ? total_energy_rel(c, r).s_rel
                        : std::numeric_limits<double>::quiet_NaN();
  return s;
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One trial step of the configured scheme from (t, x) with step h. Returns
// false when the scheme rejects the step (adaptive error control); h is
// updated by the adaptive controller either way.
template <class Controlled>
bool scheme_step(const FlowConfig& cfg, const FlowSystem& sys,
                 odeint::runge_kutta4<State>& rk4, Controlled& adaptive,
                 const State& x, const State& dxdt, double& t, State& out,
                 double& h) {
  if (cfg.method == StepMethod::Rk4) {
    rk4.do_step(sys, x, dxdt, t, out, h);
    t += h;
    return true;
  }
  State dxdt_out(x.size());
  const auto result = adaptive.try_step(sys, x, dxdt, t, out, dxdt_out, h);
  return result == odeint::success;
}

}  // namespace

void FlowConfig::validate() const {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
  for (double tol : {rel_tol, stop_tol}) {
    if (!(tol > 0.0 && tol < 1.0)) throw DomainError("tolerances must lie in (0, 1)");
  }
  if (!(abs_tol > 0.0 && abs_tol < 1.0)) throw DomainError("abs_tol must lie in (0, 1)");
  if (output_stride == 0) throw DomainError("output_stride must be positive");
  if (decay_window == 0) throw DomainError("decay_window must be positive");
}

std::string_view to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::ConvergedToFlat: return "converged_to_flat";
    case FlowStatus::DecayedToZero: return "decayed_to_zero";
    case FlowStatus::TMaxReached: return "t_max_reached";
    case FlowStatus::NumericFailure: return "numeric_failure";
  }
  return "unknown";
}

std::vector<double> rhs(const Complex& c, const Packing& r) {
  std::vector<double> out = curvature(c, r);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = -out[i] * std::sinh(r[i]);
  return out;
}

FlowTrace integrate(const Complex& c, const Packing& r0, const FlowConfig& cfg) {
  cfg.validate();
  if (r0.size() != static_cast<std::size_t>(c.vertex_count()))
    throw DomainError("initial packing length does not match the complex");

  FlowTrace trace;
  const FlowSystem sys{&c};
  odeint::runge_kutta4<State> rk4;
  auto adaptive = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol,
                                          odeint::runge_kutta_dopri5<State>());

  State x = r0.values();
  double t = 0.0;
  std::vector<double> k = curvature(c, r0);
  State dxdt(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dxdt[i] = -k[i] * std::sinh(x[i]);
  trace.samples.push_back(make_sample(c, t, x, k, cfg.record_energy));
  bool last_recorded = true;

  std::deque<double> r_max_window{*std::max_element(x.begin(), x.end())};
  double h = cfg.dt;
  // Elapsed time below this counts as having reached t_max.
  const double t_slack = 1e-12 * std::max(1.0, cfg.t_max);

  while (true) {
    if (max_abs(k) < cfg.stop_tol) {
      trace.status = FlowStatus::ConvergedToFlat;
      break;
    }
    if (cfg.detect_decay && r_max_window.size() > cfg.decay_window &&
        r_max_window.back() < cfg.decay_threshold &&
        std::is_sorted(r_max_window.rbegin(), r_max_window.rend())) {
      trace.status = FlowStatus::DecayedToZero;
      break;
    }
    if (t >= cfg.t_max - t_slack) {
      trace.status = FlowStatus::TMaxReached;
      break;
    }

    if (cfg.method == StepMethod::Rk4) h = cfg.dt;
    State x_new(x.size());
    double t_new = t;
    bool accepted = false;
    bool boundary_retry_used = !cfg.refine_at_boundary;
    bool crossed = false;
    std::string failure;
    for (int attempt = 0; attempt <= kMaxHalvings + 1000 && !accepted;) {
      h = std::min(h, cfg.t_max - t);
      t_new = t;
      bool ok = false;
      try {
        ok = scheme_step(cfg, sys, rk4, adaptive, x, dxdt, t_new, x_new, h);
        if (ok && !admissible(x_new)) {
          ok = false;
          failure = "step left the admissible radius range";
          h *= 0.5;
          ++attempt;
        } else if (!ok) {
          // Adaptive controller shrank h; not a positivity halving.
          if (h < 1e-14 * std::max(1.0, t)) {
            failure = "adaptive step size underflow";
            break;
          }
        }
      } catch (const Error& e) {
        failure = e.what();
        h *= 0.5;
        ++attempt;
      }
      if (!ok) {
        ++trace.rejected_steps;
        if (attempt > kMaxHalvings) break;
        continue;
      }
      crossed = false;
      if (c.tetrahedron_count() > 0) crossed = real_pattern(c, x) != real_pattern(c, x_new);
      if (crossed && !boundary_retry_used) {
        boundary_retry_used = true;
        ++trace.rejected_steps;
        h = 0.5 * (t_new - t);
        continue;
      }
      accepted = true;
    }
    if (!accepted) {
      trace.status = FlowStatus::NumericFailure;
      trace.message = failure.empty() ? "step rejected too often" : failure;
      break;
    }

    try {
      k = curvature(c, Packing(x_new));
    } catch (const Error& e) {
      trace.status = FlowStatus::NumericFailure;
      trace.message = e.what();
      break;
    }
    t = t_new;
    x = x_new;
    for (std::size_t i = 0; i < x.size(); ++i) dxdt[i] = -k[i] * std::sinh(x[i]);
    ++trace.accepted_steps;
    trace.class_changes += crossed;

    r_max_window.push_back(*std::max_element(x.begin(), x.end()));
    if (r_max_window.size() > cfg.decay_window + 1) r_max_window.pop_front();

    last_recorded = trace.accepted_steps % cfg.output_stride == 0;
    if (last_recorded) trace.samples.push_back(make_sample(c, t, x, k, cfg.record_energy));
  }

  if (!last_recorded) {
    try {
      trace.samples.push_back(make_sample(c, t, x, k, cfg.record_energy));
    } catch (const Error& e) {
      trace.status = FlowStatus::NumericFailure;
      trace.message = e.what();
    }
  }
  return trace;
}

void write_csv(std::ostream& os, const FlowTrace& trace) {
  const std::size_t n = trace.samples.empty() ? 0 : trace.samples.front().r.size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << ",r_" << i;
  for (std::size_t i = 0; i < n; ++i) os << ",K_" << i;
  os << ",S_rel,r_min,r_max,virtual_count\n";
  for (const FlowSample& s : trace.samples) {
    os << format17(s.t);
    for (double v : s.r) os << ',' << format17(v);
    for (double v : s.k) os << ',' << format17(v);
    os << ',' << format17(s.s_rel) << ',' << format17(s.r_min) << ','
       << format17(s.r_max) << ',' << s.virtual_count << '\n';
  }
}

double fitted_decay_rate(std::span<const double> times, std::span<const double> values) {
  double st = 0, sv = 0, stt = 0, stv = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(times.size(), values.size()); ++i) {
    if (!(values[i] > 0.0)) continue;
    const double lv = std::log(values[i]);
    st += times[i];
    sv += lv;
    stt += times[i] * times[i];
    stv += times[i] * lv;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * stt - st * st;
  if (denom == 0.0) return 0.0;
  return -(n * stv - st * sv) / denom;
}

double fitted_trace_rate(const FlowTrace& trace) {
  std::vector<double> times, values;
  for (const FlowSample& s : trace.samples) {
    times.push_back(s.t);
    values.push_back(trace.status == FlowStatus::DecayedToZero
                         ? std::tanh(0.5 * s.r_max)
                         : max_abs(s.k));
  }
  // Late-time behaviour: fit the second half of the trace.
  const std::size_t from = times.size() / 2;
  return fitted_decay_rate(std::span(times).subspan(from), std::span(values).subspan(from));
}

nlohmann::json summary_json(const FlowTrace& trace) {
  const FlowSample& last = trace.back();
  nlohmann::json doc = {
      {"status", std::string(to_string(trace.status))},
      {"t_final", last.t},
      {"k_inf_final", max_abs(last.k)},
      {"r_min_final", last.r_min},
      {"r_max_final", last.r_max},
      {"fitted_rate", fitted_trace_rate(trace)},
      {"accepted_steps", trace.accepted_steps},
      {"rejected_steps", trace.rejected_steps},
      {"class_changes", trace.class_changes},
      {"samples", trace.samples.size()},
  };
  if (!trace.message.empty()) doc["message"] = trace.message;
  return doc;
}

DecayBoundReport decay_bound_check(const FlowTrace& trace, int d_max) {
  if (d_max > 22) {
    throw HypothesisError("decay bound needs d_max <= 22, got " + std::to_string(d_max));
  }
  DecayBoundReport report;
  report.epsilon = kFourPi - d_max * kEuclideanSolidAngle;
  if (trace.samples.empty()) return report;
  const double start = std::tanh(0.5 * trace.samples.front().r_max);
  std::vector<double> times, values;
  for (const FlowSample& s : trace.samples) {
    const double lhs = std::tanh(0.5 * s.r_max);
    const double rhs_bound = start * std::exp(-report.epsilon * s.t);
    const double ratio = lhs / rhs_bound;
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (ratio > 1.0 + 1e-10) {
      report.holds = false;
      ++report.violations;
    }
    times.push_back(s.t);
    values.push_back(lhs);
  }
  report.fitted_rate = fitted_decay_rate(times, values);
  return report;
}

LowerBoundReport lower_bound_check(const FlowTrace& trace, int d_min) {
  if (d_min < 23) {
    throw HypothesisError("lower bound needs d_min >= 23, got " + std::to_string(d_min));
  }
  LowerBoundReport report;
  report.c = solve_regular(23);
  if (trace.samples.empty()) return report;
  report.bound = std::min(trace.samples.front().r_min, report.c);
  report.min_observed = std::numeric_limits<double>::infinity();
  for (const FlowSample& s : trace.samples) {
    report.min_observed = std::min(report.min_observed, s.r_min);
    if (s.r_min < report.bound * (1.0 - 1e-12)) {
      report.holds = false;
      ++report.violations;
    }
  }
  return report;
}

UpperBoundReport upper_bound_check(const Complex& c, const FlowTrace& trace) {
  UpperBoundReport report;
  const double cap = kTwoPi / c.max_degree();
  for (const FlowSample& s : trace.samples) {
    const Packing r(s.r);
    const int i = s.argmax;
    bool small = true;
    for (std::size_t t : c.incident(i)) {
      const Tetrahedron& tet = c.tetrahedron(t);
      const int slot = static_cast<int>(std::find(tet.begin(), tet.end(), i) - tet.begin());
      small = small && extended_solid_angles(c.tetra_radii(t, r))[slot] <= cap;
    }
    if (!small) continue;
    ++report.triggered;
    report.violations += s.k[i] < 0.0;
  }
  return report;
}

double solve_regular(int d) {
  if (d < 1) throw DomainError("degree must be >= 1");
  if (d <= 22) {
    throw NoSolutionError(
        "no real or virtual ball packing with vanishing curvature exists when "
        "every tetra-degree is <= 22 (degree " + std::to_string(d) + ")");
  }
  const double target = kFourPi / d;
  double lo = 1e-8, hi = 50.0;
  // regular_solid_angle is strictly decreasing: above target means t < t0.
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    (regular_solid_angle(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Packing newton_refine(const Complex& c, const Packing& r, double tol, int max_iterations) {
  Packing x = r;
  std::vector<double> k = curvature(c, x);
  for (int it = 0; it < max_iterations; ++it) {
    if (max_abs(k) < tol) return x;
    const Eigen::MatrixXd h = curvature_jacobian(c, x);
    const Eigen::LLT<Eigen::MatrixXd> llt(h);
    if (llt.info() != Eigen::Success) throw NumericError("Newton: Hessian is not positive definite");
    const Eigen::VectorXd grad = Eigen::Map<const Eigen::VectorXd>(k.data(), k.size());
    const Eigen::VectorXd delta = -llt.solve(grad);

    const double norm = grad.norm();
    bool stepped = false;
    for (double lambda = 1.0; lambda > 1e-12; lambda *= 0.5) {
      State cand(x.size());
      for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = x[i] + lambda * delta[i];
      if (!admissible(cand)) continue;
      const Packing p(cand);
      bool all_real = true;
      for (std::size_t t = 0; t < c.tetrahedron_count() && all_real; ++t)
        all_real = q_value(c.tetra_radii(t, p)) > 0.0;
      if (!all_real) continue;
      std::vector<double> k_new = curvature(c, p);
      const double norm_new =
          Eigen::Map<const Eigen::VectorXd>(k_new.data(), k_new.size()).norm();
      if (norm_new < norm) {
        x = p;
        k = std::move(k_new);
        stepped = true;
        break;
      }
    }
    if (!stepped) {
      throw NumericError("Newton: no admissible damped step inside the real region");
    }
  }
  if (max_abs(k) < tol) return x;
  throw NumericError("Newton: no convergence within the iteration limit");
}

SpectrumReport stability_spectrum(const Complex& c, const Packing& r_star) {
  const std::vector<double> k = curvature(c, r_star);
  if (max_abs(k) >= kFlatForSpectrum) {
    throw DomainError("stability_spectrum: packing is not flat (||K||_inf = " +
                      std::to_string(max_abs(k)) + ")");
  }
  const Eigen::MatrixXd h = curvature_jacobian(c, r_star);
  Eigen::VectorXd scale(r_star.size());
  for (std::size_t i = 0; i < r_star.size(); ++i) scale[i] = std::sqrt(std::sinh(r_star[i]));
  const Eigen::MatrixXd op = -(scale.asDiagonal() * h * scale.asDiagonal());

  SpectrumReport report;
  report.asymmetry = (op - op.transpose()).cwiseAbs().maxCoeff();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericError("eigen decomposition failed");
  report.eigenvalues.assign(eig.eigenvalues().data(),
                            eig.eigenvalues().data() + eig.eigenvalues().size());
  const double largest = report.eigenvalues.back();
  report.stable = largest < 0.0;
  report.rate = std::abs(largest);
  return report;
}

}  // namespace yamabe3h
