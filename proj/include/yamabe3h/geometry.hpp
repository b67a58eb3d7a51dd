#pragma once

// Per-tetrahedron hyperbolic geometry of four mutually tangent balls.
//
// A tetrahedron with ball radii r_0..r_3 has edge lengths l_mn = r_m + r_n.
// It is realizable in H^3 iff Q(r) > 0 ("real"); otherwise it is "virtual"
// and the strictly smallest radius picks the region D_i it lies in. All
// functions here are pure and thread-safe.

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include <Eigen/Core>

namespace yamabe3h {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kFourPi = 4.0 * std::numbers::pi;

// Solid angle at a vertex of the regular Euclidean tetrahedron,
// 3 arccos(1/3) - pi. The t -> 0 limit of regular_solid_angle(t).
inline const double kEuclideanSolidAngle = 3.0 * std::acos(1.0 / 3.0) - kPi;

// Accepted radius range at API boundaries. coth overflows below and the
// hyperbolic products overflow far above.
struct RadiusBounds {
  double min = 1e-8;
  double max = 50.0;
};

class Radii4 {
 public:
  // Throws DomainError unless every radius lies in [bounds.min, bounds.max].
  explicit Radii4(const std::array<double, 4>& r, RadiusBounds bounds = {});

  double operator[](int m) const { return r_[m]; }
  // coth(r_m)
  double y(int m) const { return y_[m]; }
  const std::array<double, 4>& values() const { return r_; }

  // Relabel: result[m] = (*this)[perm[m]].
  Radii4 permuted(const std::array<int, 4>& perm) const;

 private:
  std::array<double, 4> r_;
  std::array<double, 4> y_;
};

class TetraClass {
 public:
  static TetraClass real() { return TetraClass(-1); }
  static TetraClass virtual_at(int i) { return TetraClass(i); }

  bool is_real() const { return index_ < 0; }
  bool is_virtual() const { return index_ >= 0; }
  // Index of the vertex whose solid angle becomes 2*pi; -1 when real.
  int virtual_index() const { return index_; }

  bool operator==(const TetraClass&) const = default;

 private:
  explicit TetraClass(int i) : index_(i) {}
  int index_;
};

// Edge numbering used throughout: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
inline constexpr std::array<std::pair<int, int>, 6> kEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

int edge_index(int i, int j);

// The two vertices of the tetrahedron other than i and j, ascending.
std::pair<int, int> opposite(int i, int j);

struct DihedralAngles {
  std::array<double, 6> beta{};
  std::array<double, 6> length{};
  bool near_degenerate = false;

  double at(int i, int j) const { return beta[edge_index(i, j)]; }
};

struct SolidAngles {
  std::array<double, 4> alpha{};
  bool near_degenerate = false;

  double operator[](int m) const { return alpha[m]; }
};

// Q(r) = (sum y_m)^2 - 2 sum y_m^2 + 4 with y_m = coth r_m.
double q_value(const Radii4& r);

// Real iff Q > 0, else Virtual(argmin r). Throws NearBoundaryError when
// Q <= 0 and the two smallest radii agree to 1e-12 relative.
TetraClass classify(const Radii4& r);

// True when 0 < Q < 1e-14 * sum y_m^2: angles are computed but may have
// lost most of their digits.
bool is_near_degenerate(const Radii4& r);

// Radius r_i placing (r_i, r_j, r_k, r_l) exactly on Q = 0 on the D_i side:
// coth r_i = y_j + y_k + y_l + 2 sqrt(y_j y_k + y_k y_l + y_l y_j + 1).
double boundary_radius(double rj, double rk, double rl);

// cos(beta_ij) from cofactors of the Gram matrix G_ab = -cosh(l_ab),
// G_aa = -1. Throws DegenerateTetraError if not real, NumericError if the
// diagonal cofactor product is not positive.
double dihedral_cos_cofactor(const Radii4& r, int i, int j);

// cos(beta_ij) from the closed form in radii and y = coth r.
double dihedral_cos_closed(const Radii4& r, int i, int j);

DihedralAngles dihedral_angles(const Radii4& r);

// alpha_m = beta_mn + beta_mp + beta_mq - pi. Real tetrahedra only.
SolidAngles solid_angles(const Radii4& r);

// Continuous extension to all of R^4_+: equals solid_angles on real input,
// (2*pi at i, 0 elsewhere) on Virtual(i).
SolidAngles extended_solid_angles(const Radii4& r);

using Matrix4 = Eigen::Matrix4d;
using DihedralJacobian = Eigen::Matrix<double, 6, 4>;

// d(alpha)/d(r) at a real tetrahedron from the closed-form partials. The
// matrix is symmetric and negative definite.
Matrix4 solid_angle_jacobian(const Radii4& r);

// d(beta_e)/d(r_m), row e in kEdges order.
DihedralJacobian dihedral_jacobian(const Radii4& r);

// alpha_1(t * (1,1,1,1)) = 3 arccos(cosh 2t / (1 + 2 cosh 2t)) - pi.
double regular_solid_angle(double t);

}  // namespace yamabe3h
