#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "support.hpp"
#include "yamabe3h/energy.hpp"
#include "yamabe3h/errors.hpp"

namespace {

using namespace yamabe3h;
using yamabe3h::testing::random_packing;
using yamabe3h::testing::random_quadruple;
using yamabe3h::testing::random_virtual_quadruple;

constexpr double kFour = 4 * std::numbers::pi;

TEST(Curvature, PentachoronUniform) {
  const Complex c = generate(GeneratorKind::Pentachoron);
  for (double t : {0.01, 0.5, 1.0, 4.0}) {
    for (double k : curvature(c, Packing::uniform(5, t))) {
      EXPECT_NEAR(k, kFour - 4 * regular_solid_angle(t), 1e-12);
      EXPECT_GT(k, 0.0);
    }
  }
  for (double k : curvature(c, Packing::uniform(5, 1.0))) EXPECT_NEAR(k, 11.768346452506711, 1e-12);
}

TEST(Curvature, LengthMismatch) {
  const Complex c = generate(GeneratorKind::Pentachoron);
  EXPECT_THROW(curvature(c, Packing::uniform(4, 1.0)), DomainError);
  EXPECT_THROW(total_energy_rel(c, Packing::uniform(6, 1.0)), DomainError);
}

TEST(Curvature, BoundsAndSmallDegreePositivity) {
  std::mt19937_64 rng(21);
  for (const Complex& c : {generate(GeneratorKind::Pentachoron), generate(GeneratorKind::SixteenCell),
                           generate(GeneratorKind::SixHundredCell)}) {
    const double cap = 2 * std::numbers::pi * (c.max_degree() + 1);
    for (int n = 0; n < 20; ++n) {
      std::vector<double> r = random_packing(rng, c.vertex_count(), 0.01, 5.0);
      const std::vector<double> k = curvature(c, Packing(r));
      double kmax = -INFINITY;
      for (int v = 0; v < c.vertex_count(); ++v) {
        EXPECT_LE(std::abs(k[v]), cap);
        EXPECT_GE(k[v], kFour - 2 * std::numbers::pi * c.tetra_degrees()[v] - 1e-12);
        EXPECT_LE(k[v], kFour + 1e-12);
        kmax = std::max(kmax, k[v]);
      }
      // d_max <= 22 forces some positive curvature of at least eps_0.
      EXPECT_GE(kmax, kFour - 22 * kEuclideanSolidAngle - 1e-10);
    }
  }
  EXPECT_NEAR(kFour - 22 * kEuclideanSolidAngle, 0.438087448843495179, 1e-13);
}

TEST(Curvature, RegularDegree23Identity) {
  EXPECT_NEAR(kFour - 23 * regular_solid_angle(0.08370802977983863), 0.0, 1e-12);
}

TEST(Curvature, FlatOnTetraRegularCirculant) {
  const Complex c = yamabe3h::testing::circulant_degree24();
  const std::vector<double> k = curvature(c, Packing::uniform(40, 0.201706091917313901));
  for (double v : k) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Curvature, ThreadCountDoesNotChangeBits) {
  const Complex c = generate(GeneratorKind::SixHundredCell);
  std::mt19937_64 rng(22);
  const Packing r(random_packing(rng, 120, 0.05, 2.0));
  setenv("YAMABE3H_THREADS", "1", 1);
  const std::vector<double> a = curvature(c, r);
  const double sa = total_energy_rel(c, r).s_rel;
  setenv("YAMABE3H_THREADS", "4", 1);
  const std::vector<double> b = curvature(c, r);
  const double sb = total_energy_rel(c, r).s_rel;
  unsetenv("YAMABE3H_THREADS");
  EXPECT_EQ(a, b);
  EXPECT_EQ(sa, sb);
}

TEST(TetraEnergy, ZeroAtUnit) {
  EXPECT_EQ(tetra_energy_rel(Radii4({1, 1, 1, 1})), 0.0);
  EXPECT_EQ(total_energy_rel(generate(GeneratorKind::Pentachoron), Packing::uniform(5, 1.0)).s_rel, 0.0);
}

TEST(TetraEnergy, PathIndependence) {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 40; ++n) {
    const auto r = n % 2 ? random_virtual_quadruple(rng) : random_quadruple(rng, 0.1, 3.0);
    const std::array<double, 4> one{1, 1, 1, 1};
    const std::array<std::array<double, 4>, 3> via_a{{one, {2, 1, 1, 1}, r}};
    const std::array<std::array<double, 4>, 3> via_b{{one, {0.05, 2.5, 0.3, 1.0}, r}};
    const std::array<std::array<double, 4>, 4> via_c{{one, {1, 0.02, 1, 1}, {3, 3, 0.4, 0.01}, r}};
    const double direct = tetra_energy_rel(Radii4(r));
    EXPECT_NEAR(tetra_energy_along(via_a), direct, 1e-8);
    EXPECT_NEAR(tetra_energy_along(via_b), direct, 1e-8);
    EXPECT_NEAR(tetra_energy_along(via_c), direct, 1e-8);
  }
}

TEST(TetraEnergy, GradientIsExtendedAngle) {
  std::mt19937_64 rng(24);
  const double h = 1e-5;
  for (int n = 0; n < 40; ++n) {
    const auto r = n % 2 ? random_virtual_quadruple(rng) : random_quadruple(rng, 0.2, 3.0);
    const SolidAngles a = extended_solid_angles(Radii4(r));
    for (int m = 0; m < 4; ++m) {
      auto up = r, down = r;
      up[m] += h;
      down[m] -= h;
      const double fd = (tetra_energy_rel(Radii4(up)) - tetra_energy_rel(Radii4(down))) / (2 * h);
      EXPECT_NEAR(fd, a[m], 1e-6);
    }
  }
}

TEST(TotalEnergy, GradientIsCurvatureRealAndVirtual) {
  std::mt19937_64 rng(25);
  const Complex penta = generate(GeneratorKind::Pentachoron);
  const Complex sixteen = generate(GeneratorKind::SixteenCell);
  int with_virtual = 0;
  for (int n = 0; n < 16; ++n) {
    const Complex& c = n % 2 ? sixteen : penta;
    std::vector<double> r = random_packing(rng, c.vertex_count(), 1.0, 3.0);
    if (n % 4 < 2) r[n % c.vertex_count()] = 0.02;
    else for (double& v : r) v -= 0.8;
    std::size_t nv = 0;
    for (const TetraClass& cls : classify_all(c, Packing(r))) nv += cls.is_virtual();
    with_virtual += nv > 0;
    EXPECT_LT(yamabe3h::testing::energy_gradient_error(c, r, 1e-5), 1e-5);
  }
  EXPECT_GE(with_virtual, 8);
}

TEST(TotalEnergy, ConvexAlongSegments) {
  std::mt19937_64 rng(26);
  const Complex c = generate(GeneratorKind::SixteenCell);
  for (int n = 0; n < 6; ++n) {
    const std::vector<double> a = random_packing(rng, 8, 0.02, 3.0);
    const std::vector<double> b = random_packing(rng, 8, 0.02, 3.0);
    constexpr int kSteps = 16;
    std::vector<double> g;
    for (int s = 0; s <= kSteps; ++s) {
      std::vector<double> x(8);
      for (int i = 0; i < 8; ++i) x[i] = a[i] + (b[i] - a[i]) * s / kSteps;
      g.push_back(total_energy_rel(c, Packing(x)).s_rel);
    }
    for (int s = 1; s < kSteps; ++s) EXPECT_GE(g[s + 1] - 2 * g[s] + g[s - 1], -1e-8);
  }
}

TEST(TotalEnergy, HessianMatchesCurvatureDifferences) {
  std::mt19937_64 rng(27);
  const Complex c = generate(GeneratorKind::SixteenCell);
  for (int n = 0; n < 5; ++n) {
    const std::vector<double> r = random_packing(rng, 8, 0.5, 1.5);
    const EnergyReport rep = total_energy_rel(c, Packing(r), true);
    ASSERT_TRUE(rep.hessian);
    const Eigen::MatrixXd& h = *rep.hessian;
    EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues().minCoeff(), 0.0);
    const double step = 1e-6;
    for (int j = 0; j < 8; ++j) {
      std::vector<double> up = r, down = r;
      up[j] += step;
      down[j] -= step;
      const auto ku = curvature(c, Packing(up)), kd = curvature(c, Packing(down));
      for (int i = 0; i < 8; ++i) {
        const double fd = (ku[i] - kd[i]) / (2 * step);
        EXPECT_NEAR(fd, h(i, j), 1e-5 * std::max(1.0, std::abs(h(i, j))));
      }
    }
  }
}

TEST(TotalEnergy, HessianRefusedAtVirtualPacking) {
  const Complex c = generate(GeneratorKind::Pentachoron);
  const Packing r({0.001, 10, 10, 10, 10});
  EXPECT_THROW(total_energy_rel(c, r, true), UnsupportedError);
  EXPECT_NO_THROW(total_energy_rel(c, r, false));
}

TEST(TotalEnergy, JsonShape) {
  const auto doc = to_json(total_energy_rel(generate(GeneratorKind::Pentachoron),
                                            Packing::uniform(5, 1.0), true));
  EXPECT_EQ(doc["s_rel"], 0.0);
  EXPECT_EQ(doc["grad"].size(), 5u);
  EXPECT_EQ(doc["hessian"].size(), 5u);
}

TEST(WCoordinate, Constants) {
  EXPECT_EQ(w_coordinate(0.0), 0.0);
  EXPECT_NEAR(w_limit(), 3.70814935460274382, 1e-8);
  EXPECT_NEAR(w_coordinate(0.1), 0.632350166674341782, 1e-10);
  EXPECT_NEAR(w_coordinate(1.0), 1.96798273681377174, 1e-10);
  EXPECT_NEAR(w_coordinate(5.0), 3.47597686388352339, 1e-10);
  double prev = 0;
  for (double r = 0.01; r < 30; r *= 1.5) {
    const double w = w_coordinate(r);
    EXPECT_GT(w, prev);
    EXPECT_LT(w, w_limit());
    prev = w;
  }
}

TEST(WCoordinate, InverseRoundTrip) {
  for (double r : {0.1, 1.0, 5.0}) EXPECT_NEAR(w_inverse(w_coordinate(r)), r, 1e-9);
  EXPECT_EQ(w_inverse(0.0), 0.0);
  EXPECT_THROW(w_inverse(w_limit()), DomainError);
  EXPECT_THROW(w_coordinate(-1.0), DomainError);
}

}  // namespace
