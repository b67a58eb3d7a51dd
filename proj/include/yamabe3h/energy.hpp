#pragma once

// Global curvature and the variational structure on R^N_+.
//
// Energies are relative to the unit packing: U and S are only ever compared
// or differentiated, so the additive constants (volume terms) are dropped.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "yamabe3h/complex.hpp"
#include "yamabe3h/geometry.hpp"

namespace yamabe3h {

// Absolute tolerance of every per-tetrahedron line integral.
inline constexpr double kEnergyQuadratureTolerance = 1e-10;

// K_i = 4 pi - sum of extended solid angles at i over incident tetrahedra,
// summed in ascending tetrahedron order. Throws DomainError on a length
// mismatch.
std::vector<double> curvature(const Complex& c, const Packing& r);

// Per-tetrahedron real/virtual classification at r.
std::vector<TetraClass> classify_all(const Complex& c, const Packing& r);

// Line integral of sum_m alpha~_m dr_m along the polyline through the given
// waypoints. Straight legs are split where Q changes sign.
double tetra_energy_along(std::span<const std::array<double, 4>> waypoints);

// U~(r) - U~(1), integrated along the segment from (1,1,1,1) to r.
double tetra_energy_rel(const Radii4& r);

struct EnergyReport {
  // S~(r) - S~(1).
  double s_rel = 0.0;
  // Gradient of s_rel; equals curvature(c, r).
  std::vector<double> grad;
  // dK/dr, only when requested and every tetrahedron is real.
  std::optional<Eigen::MatrixXd> hessian;
};

// Throws UnsupportedError when a Hessian is requested at a packing with a
// virtual tetrahedron.
EnergyReport total_energy_rel(const Complex& c, const Packing& r,
                              bool with_hessian = false);

// dK/dr assembled from -solid_angle_jacobian blocks. Real packings only.
Eigen::MatrixXd curvature_jacobian(const Complex& c, const Packing& r);

nlohmann::json to_json(const EnergyReport& report);

// w(r) = integral_0^r ds / sqrt(sinh s).
double w_coordinate(double r);
// w(infinity), about 3.7081493546.
double w_limit();
// Inverse of w_coordinate on [0, w_limit()).
double w_inverse(double w);

}  // namespace yamabe3h
