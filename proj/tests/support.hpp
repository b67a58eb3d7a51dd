#pragma once

// Helpers shared by the unit tests and the acceptance runner. Everything here
// is written independently of the library's own formulas where it serves as
// an oracle.

#include <array>
#include <random>
#include <vector>

#include "yamabe3h/complex.hpp"

namespace yamabe3h::testing {

// alpha_1(t*(1,1,1,1)) straight from its closed form.
double oracle_regular_angle(double t);

// Classic RK4 on rho' = -(4 pi - d alpha_1(rho)) sinh rho; returns rho(t_end).
double oracle_scalar_flow(double rho0, int d, double dt, double t_end);

// Tetra-regular 4-uniform hypergraph on Z_n: tetrahedra {v, v+a, v+b, v+c}
// for each difference pattern (0 < a < b < c < n). Not a manifold, but every
// vertex has degree 4 * patterns.size(), which is all the curvature needs.
Complex circulant_complex(int n, const std::vector<std::array<int, 3>>& patterns);

// Six patterns on Z_40 giving degree 24.
Complex circulant_degree24();

std::array<double, 4> random_quadruple(std::mt19937_64& rng, double lo, double hi);
// Log-uniform in [lo, hi].
std::array<double, 4> random_log_quadruple(std::mt19937_64& rng, double lo, double hi);
// One radius in [0.005, 0.05], the rest in [1, 3]: virtual with high odds.
std::array<double, 4> random_virtual_quadruple(std::mt19937_64& rng);
std::vector<double> random_packing(std::mt19937_64& rng, std::size_t n, double lo, double hi);

// Central differences of S_rel against curvature; max |fd - K| / max(1, ||K||).
double energy_gradient_error(const Complex& c, const std::vector<double>& r, double h);

}  // namespace yamabe3h::testing
