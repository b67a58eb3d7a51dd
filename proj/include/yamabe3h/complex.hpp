#pragma once

// Triangulated closed 3-manifolds as simplicial complexes: a vertex count and
// a list of tetrahedra (vertex 4-tuples, 0-based). Incidence is derived once
// at construction; a Complex is immutable afterwards.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "yamabe3h/geometry.hpp"

namespace yamabe3h {

using Tetrahedron = std::array<int, 4>;

// One positive radius per vertex.
class Packing {
 public:
  // Throws DomainError on an empty vector or any non-positive/non-finite
  // entry.
  explicit Packing(std::vector<double> radii);
  static Packing uniform(std::size_t n, double t);

  std::size_t size() const { return r_.size(); }
  double operator[](std::size_t i) const { return r_[i]; }
  const std::vector<double>& values() const { return r_; }

  bool operator==(const Packing&) const = default;

 private:
  std::vector<double> r_;
};

class Complex {
 public:
  // Throws DomainError if a tuple has repeated or out-of-range entries, two
  // tetrahedra share a vertex set, or some vertex lies in no tetrahedron.
  Complex(int vertex_count, std::vector<Tetrahedron> tetrahedra);

  int vertex_count() const { return vertex_count_; }
  std::size_t tetrahedron_count() const { return tets_.size(); }
  const std::vector<Tetrahedron>& tetrahedra() const { return tets_; }
  const Tetrahedron& tetrahedron(std::size_t t) const { return tets_[t]; }

  // Tetrahedron indices containing v, ascending.
  std::span<const std::size_t> incident(int v) const;
  // d_v = number of tetrahedra containing v.
  const std::vector<int>& tetra_degrees() const { return degrees_; }
  int min_degree() const;
  int max_degree() const;

  // The packing restricted to tetrahedron t, in the tuple's vertex order.
  Radii4 tetra_radii(std::size_t t, const Packing& r,
                     RadiusBounds bounds = {}) const;

  bool operator==(const Complex& o) const {
    return vertex_count_ == o.vertex_count_ && tets_ == o.tets_;
  }

 private:
  int vertex_count_;
  std::vector<Tetrahedron> tets_;
  std::vector<std::size_t> incidence_offsets_;
  std::vector<std::size_t> incidence_;
  std::vector<int> degrees_;
};

std::vector<int> tetra_degrees(const Complex& c);

struct ValidationReport {
  bool triangles_paired = true;
  bool edge_links_are_cycles = true;
  bool vertex_links_connected = true;
  bool vertex_links_spherical = true;
  std::vector<int> vertex_link_euler;
  int min_degree = 0;
  int max_degree = 0;
  bool degree_at_least_23 = false;
  bool degree_at_most_22 = false;
  // Human-readable description of each failed check (capped per check).
  std::vector<std::string> failures;

  bool passed() const {
    return triangles_paired && edge_links_are_cycles && vertex_links_connected &&
           vertex_links_spherical;
  }
};

// Closed-manifold checks: every triangle in exactly two tetrahedra, every
// edge link a single cycle, every vertex link a connected surface with Euler
// characteristic 2. Never throws; failures are report entries.
ValidationReport validate(const Complex& c);

nlohmann::json to_json(const ValidationReport& report);

// "yamabe3h-tri/1" documents. Unknown top-level fields are rejected.
Complex parse_complex(std::string_view text);
std::string serialize(const Complex& c);

// "yamabe3h-packing/1" documents.
Packing parse_packing(std::string_view text);
std::string serialize(const Packing& r);

enum class GeneratorKind { Pentachoron, SixteenCell, SixHundredCell };

// Boundary complexes of regular 4-polytopes, all triangulating S^3:
// pentachoron (N=5, 5 tets, d=4), 16-cell (N=8, 16 tets, d=8),
// 600-cell (N=120, 600 tets, d=20).
Complex generate(GeneratorKind kind);
// Accepts "pentachoron", "sixteen_cell", "six_hundred_cell". Throws
// DomainError on anything else.
Complex generate(std::string_view kind);

// 1-4 move: cone tetrahedron t off a new vertex N. Preserves manifoldness.
Complex subdivide_tetrahedron(const Complex& c, std::size_t t);

}  // namespace yamabe3h
