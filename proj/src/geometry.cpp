#include "yamabe3h/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/LU>

#include "yamabe3h/errors.hpp"

namespace yamabe3h {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kNearDegenerate = 1e-14;
constexpr double kClampTolerance = 1e-9;

double clamped_acos(double c) {
  if (!std::isfinite(c) || std::abs(c) > 1.0 + kClampTolerance) {
    throw NumericError("dihedral cosine " + std::to_string(c) +
                       " outside [-1, 1] beyond tolerance");
  }
  return std::acos(std::clamp(c, -1.0, 1.0));
}

void require_real(const Radii4& r, const char* what) {
  if (q_value(r) <= 0.0) {
    throw DegenerateTetraError(std::string(what) +
                               ": tetrahedron is virtual (Q <= 0)");
  }
}

// The four vertices in the order (i, j, k, l) with {k, l} = opposite(i, j).
struct Labels {
  int i, j, k, l;
};

Labels labels(int i, int j) {
  auto [k, l] = opposite(i, j);
  return {i, j, k, l};
}

// Determinant of the 3x3 minor (rows != row, cols != col) of J + A, where J
// is the all-ones matrix. By the matrix determinant lemma this equals
// det(A_m) + 1^T adj(A_m) 1, which never forms the O(1) entries of J + A
// and so keeps its digits when every A entry is small.
double shifted_minor_det(const Matrix4& a, int row, int col) {
  std::array<int, 3> rs{}, cs{};
  for (int m = 0, p = 0, q = 0; m < 4; ++m) {
    if (m != row) rs[p++] = m;
    if (m != col) cs[q++] = m;
  }
  Eigen::Matrix3d m;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) m(p, q) = a(rs[p], cs[q]);

  double cofactor_sum = 0.0;
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      const int p0 = p == 0 ? 1 : 0, p1 = p == 2 ? 1 : 2;
      const int q0 = q == 0 ? 1 : 0, q1 = q == 2 ? 1 : 2;
      const double minor = m(p0, q0) * m(p1, q1) - m(p0, q1) * m(p1, q0);
      cofactor_sum += ((p + q) % 2 == 0 ? minor : -minor);
    }
  }
  return m.determinant() + cofactor_sum;
}

// (k, l) cofactor of G = -(J + A).
double gram_cofactor(const Matrix4& a, int k, int l) {
  const double sign = (k + l) % 2 == 0 ? 1.0 : -1.0;
  return -sign * shifted_minor_det(a, k, l);
}

}  // namespace

Radii4::Radii4(const std::array<double, 4>& r, RadiusBounds bounds) : r_(r) {
  for (int m = 0; m < 4; ++m) {
    if (!(r[m] > 0.0) || !std::isfinite(r[m])) {
      throw DomainError("radius " + std::to_string(m) + " = " +
                        std::to_string(r[m]) + " is not positive");
    }
    if (r[m] < bounds.min || r[m] > bounds.max) {
      throw DomainError("radius " + std::to_string(m) + " = " +
                        std::to_string(r[m]) + " outside [" +
                        std::to_string(bounds.min) + ", " +
                        std::to_string(bounds.max) + "]");
    }
    y_[m] = 1.0 / std::tanh(r[m]);
  }
}

Radii4 Radii4::permuted(const std::array<int, 4>& perm) const {
  return Radii4({r_[perm[0]], r_[perm[1]], r_[perm[2]], r_[perm[3]]},
                RadiusBounds{0.0, std::numeric_limits<double>::infinity()});
}

int edge_index(int i, int j) {
  if (i > j) std::swap(i, j);
  static constexpr int table[4][4] = {
      {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[i][j];
}

std::pair<int, int> opposite(int i, int j) {
  std::array<int, 2> rest{};
  int n = 0;
  for (int m = 0; m < 4; ++m)
    if (m != i && m != j) rest[n++] = m;
  return {rest[0], rest[1]};
}

double q_value(const Radii4& r) {
  double sum = 0.0, sum_sq = 0.0;
  for (int m = 0; m < 4; ++m) {
    sum += r.y(m);
    sum_sq += r.y(m) * r.y(m);
  }
  return sum * sum - 2.0 * sum_sq + 4.0;
}

bool is_near_degenerate(const Radii4& r) {
  double scale = 0.0;
  for (int m = 0; m < 4; ++m) scale += r.y(m) * r.y(m);
  const double q = q_value(r);
  return q > 0.0 && q < kNearDegenerate * scale;
}

TetraClass classify(const Radii4& r) {
  if (q_value(r) > 0.0) return TetraClass::real();
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return r[a] < r[b]; });
  const double lo = r[order[0]], next = r[order[1]];
  if (next - lo <= kTieTolerance * next) {
    throw NearBoundaryError(
        "Q <= 0 but the two smallest radii coincide within tolerance");
  }
  return TetraClass::virtual_at(order[0]);
}

double boundary_radius(double rj, double rk, double rl) {
  for (double v : {rj, rk, rl}) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("boundary_radius: radii must be positive");
  }
  const double yj = 1.0 / std::tanh(rj), yk = 1.0 / std::tanh(rk),
               yl = 1.0 / std::tanh(rl);
  const double yi = yj + yk + yl + 2.0 * std::sqrt(yj * yk + yk * yl + yl * yj + 1.0);
  return std::atanh(1.0 / yi);
}

double dihedral_cos_cofactor(const Radii4& r, int i, int j) {
  require_real(r, "dihedral_cos_cofactor");
  // G = -(J + A) with A_ab = 2 sinh^2(l_ab / 2) = cosh(l_ab) - 1.
  Matrix4 a = Matrix4::Zero();
  for (int p = 0; p < 4; ++p) {
    for (int q = 0; q < 4; ++q) {
      if (p == q) continue;
      const double s = std::sinh(0.5 * (r[p] + r[q]));
      a(p, q) = 2.0 * s * s;
    }
  }
  const auto [k, l] = opposite(i, j);
  const double ckk = gram_cofactor(a, k, k);
  const double cll = gram_cofactor(a, l, l);
  if (!(ckk * cll > 0.0)) {
    throw NumericError("dihedral_cos_cofactor: c_kk * c_ll <= 0");
  }
  return gram_cofactor(a, k, l) / std::sqrt(ckk * cll);
}

double dihedral_cos_closed(const Radii4& r, int i, int j) {
  require_real(r, "dihedral_cos_closed");
  const auto [k, l] = opposite(i, j);
  const double yi = r.y(i), yj = r.y(j), yk = r.y(k), yl = r.y(l);
  const double pre =
      std::sinh(r[i]) * std::sinh(r[j]) * std::sqrt(std::sinh(r[k]) * std::sinh(r[l])) /
      (4.0 * std::sqrt(std::sinh(r[i] + r[j] + r[k]) * std::sinh(r[i] + r[j] + r[l])));
  // Q - (y_i + y_j)^2 + (y_k - y_l)^2, expanded.
  const double bracket = 2.0 * ((yi + yj) * (yk + yl) - yi * yi - yj * yj + 2.0);
  return pre * bracket;
}

DihedralAngles dihedral_angles(const Radii4& r) {
  require_real(r, "dihedral_angles");
  DihedralAngles out;
  out.near_degenerate = is_near_degenerate(r);
  for (int e = 0; e < 6; ++e) {
    const auto [i, j] = kEdges[e];
    out.beta[e] = clamped_acos(dihedral_cos_closed(r, i, j));
    out.length[e] = r[i] + r[j];
  }
  return out;
}

SolidAngles solid_angles(const Radii4& r) {
  const DihedralAngles d = dihedral_angles(r);
  SolidAngles out;
  out.near_degenerate = d.near_degenerate;
  for (int m = 0; m < 4; ++m) {
    double sum = 0.0;
    for (int n = 0; n < 4; ++n)
      if (n != m) sum += d.at(m, n);
    out.alpha[m] = sum - kPi;
  }
  return out;
}

SolidAngles extended_solid_angles(const Radii4& r) {
  const TetraClass cls = classify(r);
  if (cls.is_real()) return solid_angles(r);
  SolidAngles out;
  out.alpha[cls.virtual_index()] = kTwoPi;
  return out;
}

Matrix4 solid_angle_jacobian(const Radii4& r) {
  require_real(r, "solid_angle_jacobian");
  const double sqrt_q = std::sqrt(q_value(r));
  Matrix4 jac;

  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const auto [ii, jj, k, l] = labels(i, j);
      const double yi = r.y(ii), yj = r.y(jj), yk = r.y(k), yl = r.y(l);
      const double pre = std::sinh(r[k]) * std::sinh(r[l]) /
                         (sqrt_q * std::sinh(r[ii] + r[jj] + r[k]) *
                          std::sinh(r[ii] + r[jj] + r[l]));
      const double bracket = 2.0 - (yk - yl) * (yk - yl) +
                             yi * (yj + yk + yl) + yj * (yi + yk + yl);
      jac(i, j) = jac(j, i) = pre * bracket;
    }
  }

  for (int i = 0; i < 4; ++i) {
    std::array<int, 3> o{};
    for (int m = 0, n = 0; m < 4; ++m)
      if (m != i) o[n++] = m;
    const int j = o[0], k = o[1], l = o[2];
    const double yi = r.y(i), yj = r.y(j), yk = r.y(k), yl = r.y(l);
    const double si = std::sinh(r[i]), sj = std::sinh(r[j]),
                 sk = std::sinh(r[k]), sl = std::sinh(r[l]);
    const double pre = -si * sj * sj * sk * sk * sl * sl /
                       (sqrt_q * std::sinh(r[i] + r[j] + r[k]) *
                        std::sinh(r[i] + r[j] + r[l]) * std::sinh(r[i] + r[k] + r[l]));
    const double q = q_value(r);
    const double head =
        yi * yi * yj * yk * yl *
        (2 * yi + yj + yk + yl + yi / yj * (yi + yk + yl) +
         yi / yk * (yi + yj + yl) + yi / yl * (yi + yj + yk) +
         (2 / yi + 1 / yj + 1 / yk + 1 / yl) * q);
    const double tail =
        6 - 2 * yk * yk + 6 * yk * yl - yk * yk * yk * yl - 2 * yl * yl +
        2 * yk * yk * yl * yl - yk * yl * yl * yl - yj * yj * yj * (yk + yl) +
        4 * yi * yi * (yj + yk + yl) * (yj + yk + yl) +
        2 * yj * yj * (-1 + yk * yk + yk * yl + yl * yl) -
        yj * (yk * yk * yk - 2 * yk * yk * yl + yl * (-6 + yl * yl) -
              2 * yk * (3 + yl * yl)) +
        yi * (-2 * yj * yj * yj + 10 * yk - 2 * yk * yk * yk + 10 * yl +
              3 * yk * yk * yl + 3 * yk * yl * yl - 2 * yl * yl * yl +
              3 * yj * yj * (yk + yl) +
              yj * (10 + 3 * yk * yk + 16 * yk * yl + 3 * yl * yl));
    jac(i, i) = pre * (head + tail);
  }
  return jac;
}

namespace {

// d(beta_ij)/d(r_i).
double dbeta_own(const Radii4& r, int i, int j, double sqrt_q) {
  const auto [k, l] = opposite(i, j);
  const double yi = r.y(i), yj = r.y(j), yk = r.y(k), yl = r.y(l);
  const double sj = std::sinh(r[j]);
  const double pre = sj * sj * std::sinh(r[k]) * std::sinh(r[l]) /
                     (2.0 * sqrt_q * std::sinh(r[i] + r[j] + r[k]) *
                      std::sinh(r[i] + r[j] + r[l]));
  const double ratio = yi / yj;
  const double body =
      yj * yj *
          (-yk * yk - yl * yl -
           2 * ratio * (yi * yk + yi * yl + yk * yl * (2 + ratio)) +
           (yj - yi) * (2 * yi + yk + yl)) -
      4 + 2 * yj * yj + (yk - yl) * (yk - yl) - 3 * yj * (yk + yl) -
      3 * yi * (2 * yj + yk + yl);
  return pre * body;
}

// d(beta_ij)/d(r_k) for k not in {i, j}.
double dbeta_far(const Radii4& r, int i, int j, int k, double sqrt_q) {
  int l = 0;
  while (l == i || l == j || l == k) ++l;
  return std::sinh(r[i] + r[j]) /
         (2.0 * sqrt_q * std::sinh(r[k]) * std::sinh(r[i] + r[j] + r[k])) *
         (r.y(i) + r.y(j) + r.y(k) - r.y(l));
}

}  // namespace

DihedralJacobian dihedral_jacobian(const Radii4& r) {
  require_real(r, "dihedral_jacobian");
  const double sqrt_q = std::sqrt(q_value(r));
  DihedralJacobian jac;
  for (int e = 0; e < 6; ++e) {
    const auto [i, j] = kEdges[e];
    const auto [k, l] = opposite(i, j);
    jac(e, i) = dbeta_own(r, i, j, sqrt_q);
    jac(e, j) = dbeta_own(r, j, i, sqrt_q);
    jac(e, k) = dbeta_far(r, i, j, k, sqrt_q);
    jac(e, l) = dbeta_far(r, i, j, l, sqrt_q);
  }
  return jac;
}

double regular_solid_angle(double t) {
  if (!(t > 0.0)) throw DomainError("regular_solid_angle: t must be positive");
  // cosh 2t / (1 + 2 cosh 2t), written to survive cosh overflow.
  const double c = 1.0 / (2.0 + 1.0 / std::cosh(2.0 * t));
  return 3.0 * std::acos(c) - kPi;
}

}  // namespace yamabe3h
