#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "yamabe3h/complex.hpp"
#include "yamabe3h/errors.hpp"

namespace yamabe3h {

namespace {

Complex pentachoron() {
  std::vector<Tetrahedron> tets;
  for (int skip = 0; skip < 5; ++skip) {
    Tetrahedron t{};
    for (int v = 0, n = 0; v < 5; ++v)
      if (v != skip) t[n++] = v;
    tets.push_back(t);
  }
  return Complex(5, std::move(tets));
}

// Cross-polytope: vertex 2a is +e_a, 2a+1 is -e_a; every choice of one
// vertex per axis spans a facet.
Complex sixteen_cell() {
  std::vector<Tetrahedron> tets;
  for (int mask = 0; mask < 16; ++mask) {
    Tetrahedron t{};
    for (int a = 0; a < 4; ++a) t[a] = 2 * a + ((mask >> a) & 1);
    tets.push_back(t);
  }
  return Complex(8, std::move(tets));
}

using Quat = std::array<double, 4>;

// The 120 unit quaternions of the binary icosahedral group.
std::vector<Quat> icosians() {
  std::vector<Quat> out;
  for (int a = 0; a < 4; ++a) {
    for (double s : {1.0, -1.0}) {
      Quat q{};
      q[a] = s;
      out.push_back(q);
    }
  }
  for (int mask = 0; mask < 16; ++mask) {
    Quat q{};
    for (int a = 0; a < 4; ++a) q[a] = (mask >> a) & 1 ? -0.5 : 0.5;
    out.push_back(q);
  }
  const double phi = std::numbers::phi;
  const std::array<double, 4> base{phi / 2, 0.5, 1 / (2 * phi), 0.0};
  // Even permutations of (phi, 1, 1/phi, 0) / 2 with all sign choices.
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    int inversions = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) inversions += perm[a] > perm[b];
    if (inversions % 2 != 0) continue;
    for (int mask = 0; mask < 8; ++mask) {
      Quat q{};
      for (int a = 0; a < 4; ++a) q[a] = base[perm[a]];
      for (int a = 0, bit = 0; a < 4; ++a) {
        if (perm[a] == 3) continue;
        if ((mask >> bit++) & 1) q[a] = -q[a];
      }
      out.push_back(q);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

// Facets of the 600-cell are exactly the 4-cliques of its edge graph
// (neighbours at angle pi/5).
Complex six_hundred_cell() {
  const std::vector<Quat> v = icosians();
  const int n = static_cast<int>(v.size());
  const double edge_dot = std::numbers::phi / 2;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      double d = 0;
      for (int m = 0; m < 4; ++m) d += v[a][m] * v[b][m];
      adj[a][b] = adj[b][a] = std::abs(d - edge_dot) < 1e-9;
    }
  }
  std::vector<Tetrahedron> tets;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!adj[a][b]) continue;
      for (int c = b + 1; c < n; ++c) {
        if (!adj[a][c] || !adj[b][c]) continue;
        for (int d = c + 1; d < n; ++d)
          if (adj[a][d] && adj[b][d] && adj[c][d]) tets.push_back({a, b, c, d});
      }
    }
  return Complex(n, std::move(tets));
}

}  // namespace

Complex generate(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Pentachoron: return pentachoron();
    case GeneratorKind::SixteenCell: return sixteen_cell();
    case GeneratorKind::SixHundredCell: return six_hundred_cell();
  }
  throw DomainError("unknown generator kind");
}

Complex generate(std::string_view kind) {
  if (kind == "pentachoron") return generate(GeneratorKind::Pentachoron);
  if (kind == "sixteen_cell") return generate(GeneratorKind::SixteenCell);
  if (kind == "six_hundred_cell") return generate(GeneratorKind::SixHundredCell);
  throw DomainError("unknown complex kind \"" + std::string(kind) + "\"");
}

}  // namespace yamabe3h
