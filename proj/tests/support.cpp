#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "yamabe3h/energy.hpp"

namespace yamabe3h::testing {

double oracle_regular_angle(double t) {
  const double c = std::cosh(2 * t);
  return 3 * std::acos(c / (1 + 2 * c)) - std::numbers::pi;
}

double oracle_scalar_flow(double rho0, int d, double dt, double t_end) {
  const auto f = [d](double rho) {
    return -(4 * std::numbers::pi - d * oracle_regular_angle(rho)) * std::sinh(rho);
  };
  double rho = rho0;
  const long steps = std::lround(t_end / dt);
  for (long n = 0; n < steps; ++n) {
    const double k1 = f(rho);
    const double k2 = f(rho + 0.5 * dt * k1);
    const double k3 = f(rho + 0.5 * dt * k2);
    const double k4 = f(rho + dt * k3);
    rho += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return rho;
}

Complex circulant_complex(int n, const std::vector<std::array<int, 3>>& patterns) {
  std::vector<Tetrahedron> tets;
  for (const auto& [a, b, c] : patterns)
    for (int v = 0; v < n; ++v) tets.push_back({v, (v + a) % n, (v + b) % n, (v + c) % n});
  return Complex(n, std::move(tets));
}

Complex circulant_degree24() {
  return circulant_complex(40, {{{1, 2, 3}, {1, 3, 7}, {2, 5, 11}, {1, 5, 13}, {3, 8, 17},
                                 {2, 9, 19}}});
}

std::array<double, 4> random_quadruple(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return {u(rng), u(rng), u(rng), u(rng)};
}

std::array<double, 4> random_log_quadruple(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return {std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng)), std::exp(u(rng))};
}

std::array<double, 4> random_virtual_quadruple(std::mt19937_64& rng) {
  std::array<double, 4> r = random_quadruple(rng, 1.0, 3.0);
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> tiny(0.005, 0.05);
  r[pick(rng)] = tiny(rng);
  return r;
}

std::vector<double> random_packing(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> r(n);
  for (double& v : r) v = u(rng);
  return r;
}

double energy_gradient_error(const Complex& c, const std::vector<double>& r, double h) {
  const std::vector<double> k = curvature(c, Packing(r));
  double err = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::vector<double> up = r, down = r;
    up[i] += h;
    down[i] -= h;
    const double fd =
        (total_energy_rel(c, Packing(up)).s_rel - total_energy_rel(c, Packing(down)).s_rel) /
        (2 * h);
    err = std::max(err, std::abs(fd - k[i]));
    scale = std::max(scale, std::abs(k[i]));
  }
  return err / scale;
}

}  // namespace yamabe3h::testing
