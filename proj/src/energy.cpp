#include "yamabe3h/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "yamabe3h/errors.hpp"
#include "yamabe3h/parallel.hpp"
#include "yamabe3h/quadrature.hpp"

namespace yamabe3h {

namespace {

constexpr int kSignSamples = 32;
constexpr int kRootBisections = 80;

void require_length(const Complex& c, const Packing& r) {
  if (r.size() != static_cast<std::size_t>(c.vertex_count())) {
    throw DomainError("packing has " + std::to_string(r.size()) +
                      " radii, complex has " + std::to_string(c.vertex_count()) +
                      " vertices");
  }
}

std::array<double, 4> lerp(const std::array<double, 4>& a,
                           const std::array<double, 4>& b, double s) {
  std::array<double, 4> out{};
  for (int m = 0; m < 4; ++m) out[m] = a[m] + s * (b[m] - a[m]);
  return out;
}

double q_at(const std::array<double, 4>& a, const std::array<double, 4>& b,
            double s) {
  return q_value(Radii4(lerp(a, b, s)));
}

// Parameters in (0, 1) where Q changes sign along the leg a -> b.
std::vector<double> boundary_crossings(const std::array<double, 4>& a,
                                       const std::array<double, 4>& b) {
  std::vector<double> roots;
  double s_prev = 0.0;
  bool inside_prev = q_at(a, b, 0.0) > 0.0;
  for (int n = 1; n <= kSignSamples; ++n) {
    const double s = static_cast<double>(n) / kSignSamples;
    const bool inside = q_at(a, b, s) > 0.0;
    if (inside != inside_prev) {
      double lo = s_prev, hi = s;
      for (int it = 0; it < kRootBisections && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((q_at(a, b, mid) > 0.0) == inside_prev ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    s_prev = s;
    inside_prev = inside;
  }
  return roots;
}

double integrate_leg(const std::array<double, 4>& a,
                     const std::array<double, 4>& b) {
  if (a == b) return 0.0;
  std::array<double, 4> delta{};
  for (int m = 0; m < 4; ++m) delta[m] = b[m] - a[m];
  const auto integrand = [&](double s) {
    const SolidAngles alpha = extended_solid_angles(Radii4(lerp(a, b, s)));
    double v = 0.0;
    for (int m = 0; m < 4; ++m) v += alpha[m] * delta[m];
    return v;
  };

  std::vector<double> knots{0.0};
  for (double s : boundary_crossings(a, b)) knots.push_back(s);
  knots.push_back(1.0);
  const double tol = kEnergyQuadratureTolerance / static_cast<double>(knots.size() - 1);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < knots.size(); ++p) {
    if (knots[p + 1] <= knots[p]) continue;
    total += integrate_adaptive(integrand, knots[p], knots[p + 1], tol).value;
  }
  return total;
}

}  // namespace

std::vector<TetraClass> classify_all(const Complex& c, const Packing& r) {
  require_length(c, r);
  std::vector<TetraClass> out;
  out.reserve(c.tetrahedron_count());
  for (std::size_t t = 0; t < c.tetrahedron_count(); ++t)
    out.push_back(classify(c.tetra_radii(t, r)));
  return out;
}

std::vector<double> curvature(const Complex& c, const Packing& r) {
  require_length(c, r);
  std::vector<SolidAngles> angles(c.tetrahedron_count());
  parallel_for(c.tetrahedron_count(), [&](std::size_t t) {
    angles[t] = extended_solid_angles(c.tetra_radii(t, r));
  });

  std::vector<double> k(c.vertex_count());
  for (int v = 0; v < c.vertex_count(); ++v) {
    double sum = 0.0;
    for (std::size_t t : c.incident(v)) {
      const Tetrahedron& tet = c.tetrahedron(t);
      const int slot = static_cast<int>(std::find(tet.begin(), tet.end(), v) - tet.begin());
      sum += angles[t][slot];
    }
    k[v] = kFourPi - sum;
  }
  return k;
}

double tetra_energy_along(std::span<const std::array<double, 4>> waypoints) {
  double total = 0.0;
  for (std::size_t n = 0; n + 1 < waypoints.size(); ++n) {
    // Validates the endpoints; interior points of a leg stay in range.
    Radii4 check_a(waypoints[n]), check_b(waypoints[n + 1]);
    (void)check_a;
    (void)check_b;
    total += integrate_leg(waypoints[n], waypoints[n + 1]);
  }
  return total;
}

double tetra_energy_rel(const Radii4& r) {
  const std::array<std::array<double, 4>, 2> path{{{1.0, 1.0, 1.0, 1.0}, r.values()}};
  return tetra_energy_along(path);
}

EnergyReport total_energy_rel(const Complex& c, const Packing& r,
                              bool with_hessian) {
  require_length(c, r);
  EnergyReport report;
  report.grad = curvature(c, r);
  if (with_hessian) report.hessian = curvature_jacobian(c, r);

  std::vector<double> u(c.tetrahedron_count());
  parallel_for(
      c.tetrahedron_count(),
      [&](std::size_t t) { u[t] = tetra_energy_rel(c.tetra_radii(t, r)); }, 8);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += kFourPi * (r[i] - 1.0);
  for (double ut : u) s -= ut;
  report.s_rel = s;
  return report;
}

Eigen::MatrixXd curvature_jacobian(const Complex& c, const Packing& r) {
  require_length(c, r);
  for (std::size_t t = 0; t < c.tetrahedron_count(); ++t) {
    if (!classify(c.tetra_radii(t, r)).is_real()) {
      throw UnsupportedError("dK/dr requested at a packing where tetrahedron " +
                             std::to_string(t) + " is virtual");
    }
  }
  std::vector<Matrix4> blocks(c.tetrahedron_count());
  parallel_for(c.tetrahedron_count(), [&](std::size_t t) {
    blocks[t] = solid_angle_jacobian(c.tetra_radii(t, r));
  });
  const int n = c.vertex_count();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    const Tetrahedron& tet = c.tetrahedron(t);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) h(tet[a], tet[b]) -= blocks[t](a, b);
  }
  return h;
}

nlohmann::json to_json(const EnergyReport& report) {
  nlohmann::json doc = {{"s_rel", report.s_rel}, {"grad", report.grad}};
  if (report.hessian) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < report.hessian->rows(); ++i) {
      std::vector<double> row(report.hessian->cols());
      for (Eigen::Index j = 0; j < report.hessian->cols(); ++j) row[j] = (*report.hessian)(i, j);
      rows.push_back(row);
    }
    doc["hessian"] = rows;
  }
  return doc;
}

double w_coordinate(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("w_coordinate: r must be >= 0");
  if (r == 0.0) return 0.0;
  // s = u^2 removes the 1/sqrt(s) singularity: ds / sqrt(sinh s) = 2u du / sqrt(sinh u^2).
  const auto integrand = [](double u) {
    const double s = u * u;
    if (s < 1e-150) return 2.0;
    return 2.0 * u / std::sqrt(std::sinh(s));
  };
  return integrate_adaptive(integrand, 0.0, std::sqrt(r), 1e-14).value;
}

double w_limit() {
  static const double limit = [] {
    boost::math::quadrature::exp_sinh<double> tail;
    const double rest = tail.integrate(
        [](double s) { return 1.0 / std::sqrt(std::sinh(s)); }, 1.0,
        std::numeric_limits<double>::infinity());
    return w_coordinate(1.0) + rest;
  }();
  return limit;
}

double w_inverse(double w) {
  if (!(w >= 0.0) || !(w < w_limit())) {
    throw DomainError("w_inverse: w must lie in [0, w(infinity))");
  }
  if (w == 0.0) return 0.0;
  double hi = 1.0;
  while (w_coordinate(hi) < w) {
    hi *= 2.0;
    if (hi > 700.0) throw NumericError("w_inverse: w too close to w(infinity)");
  }
  const auto f = [w](double r) { return w_coordinate(r) - w; };
  std::uintmax_t iterations = 200;
  const auto [lo_r, hi_r] = boost::math::tools::toms748_solve(
      f, 0.0, hi, -w, f(hi), boost::math::tools::eps_tolerance<double>(52), iterations);
  return 0.5 * (lo_r + hi_r);
}

}  // namespace yamabe3h
