#include "yamabe3h/complex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "yamabe3h/errors.hpp"

namespace yamabe3h {

namespace {

constexpr const char* kTriFormat = "yamabe3h-tri/1";
constexpr const char* kPackingFormat = "yamabe3h-packing/1";
constexpr std::size_t kMaxFailuresPerCheck = 8;

Tetrahedron sorted(Tetrahedron t) {
  std::sort(t.begin(), t.end());
  return t;
}

// Small union-find over dense integer ids.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }
  std::size_t components() {
    std::size_t n = 0;
    for (std::size_t a = 0; a < parent_.size(); ++a) n += find(a) == a;
    return n;
  }

 private:
  std::vector<std::size_t> parent_;
};

void note(std::vector<std::string>& failures, std::size_t& count,
          const std::string& msg) {
  if (count++ < kMaxFailuresPerCheck) failures.push_back(msg);
}

std::string join(std::initializer_list<int> v) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int x : v) {
    if (!first) os << ',';
    os << x;
    first = false;
  }
  os << '}';
  return os.str();
}

void check_edge_links(const Complex& c, ValidationReport& report) {
  // Edge (a, b) -> list of opposite edges (c, d).
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> links;
  for (const Tetrahedron& t : c.tetrahedra()) {
    const Tetrahedron s = sorted(t);
    for (const auto& [i, j] : kEdges) {
      const auto [k, l] = opposite(i, j);
      links[{s[i], s[j]}].push_back({s[k], s[l]});
    }
  }
  std::size_t failures = 0;
  for (const auto& [edge, link] : links) {
    std::map<int, int> degree;
    for (const auto& [u, v] : link) {
      ++degree[u];
      ++degree[v];
    }
    bool ok = link.size() >= 3 && degree.size() == link.size();
    for (const auto& [v, d] : degree) ok = ok && d == 2;
    if (ok) {
      std::map<int, std::size_t> id;
      for (const auto& [v, d] : degree) id.emplace(v, id.size());
      DisjointSets sets(id.size());
      for (const auto& [u, v] : link) sets.unite(id[u], id[v]);
      ok = sets.components() == 1;
    }
    if (!ok) {
      report.edge_links_are_cycles = false;
      note(report.failures, failures,
           "edge " + join({edge.first, edge.second}) +
               ": link is not a single cycle");
    }
  }
}

void check_vertex_links(const Complex& c, ValidationReport& report) {
  report.vertex_link_euler.assign(c.vertex_count(), 0);
  std::size_t conn_failures = 0, sphere_failures = 0;
  for (int v = 0; v < c.vertex_count(); ++v) {
    std::set<int> verts;
    std::map<std::pair<int, int>, int> edge_uses;
    std::vector<std::array<int, 3>> faces;
    for (std::size_t t : c.incident(v)) {
      std::array<int, 3> f{};
      int n = 0;
      for (int u : c.tetrahedron(t))
        if (u != v) f[n++] = u;
      std::sort(f.begin(), f.end());
      faces.push_back(f);
      for (int u : f) verts.insert(u);
      ++edge_uses[{f[0], f[1]}];
      ++edge_uses[{f[0], f[2]}];
      ++edge_uses[{f[1], f[2]}];
    }
    const long chi = static_cast<long>(verts.size()) -
                     static_cast<long>(edge_uses.size()) +
                     static_cast<long>(faces.size());
    report.vertex_link_euler[v] = static_cast<int>(chi);

    std::map<int, std::size_t> id;
    for (int u : verts) id.emplace(u, id.size());
    DisjointSets sets(id.size());
    for (const auto& f : faces) {
      sets.unite(id[f[0]], id[f[1]]);
      sets.unite(id[f[0]], id[f[2]]);
    }
    if (sets.components() != 1) {
      report.vertex_links_connected = false;
      note(report.failures, conn_failures,
           "vertex " + std::to_string(v) + ": link is not connected");
    }
    bool closed = true;
    for (const auto& [e, uses] : edge_uses) closed = closed && uses == 2;
    if (!closed || chi != 2) {
      report.vertex_links_spherical = false;
      note(report.failures, sphere_failures,
           "vertex " + std::to_string(v) + ": link is not a closed surface "
           "with Euler characteristic 2 (chi = " + std::to_string(chi) + ")");
    }
  }
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text,
                                                    std::size_t byte) {
  std::size_t line = 1, column = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

nlohmann::json parse_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    throw ParseError("JSON syntax error: " + std::string(e.what()), line, column);
  }
}

void require_fields(const nlohmann::json& doc, const char* format,
                    std::initializer_list<const char*> fields) {
  using Kind = ParseError::Kind;
  if (!doc.is_object()) throw ParseError(Kind::Schema, "top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find_if(fields.begin(), fields.end(), [&](const char* f) {
          return key == f;
        }) == fields.end()) {
      throw ParseError(Kind::Schema, "unknown top-level field \"" + key + "\"");
    }
  }
  for (const char* f : fields) {
    if (!doc.contains(f))
      throw ParseError(Kind::Schema, std::string("missing field \"") + f + "\"");
  }
  const auto& fmt = doc.at("format");
  if (!fmt.is_string() || fmt.get<std::string>() != format) {
    throw ParseError(Kind::Schema, std::string("format must be \"") + format + "\"");
  }
}

}  // namespace

Packing::Packing(std::vector<double> radii) : r_(std::move(radii)) {
  if (r_.empty()) throw DomainError("packing is empty");
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (!(r_[i] > 0.0) || !std::isfinite(r_[i])) {
      throw DomainError("packing radius " + std::to_string(i) + " = " +
                        std::to_string(r_[i]) + " is not positive");
    }
  }
}

Packing Packing::uniform(std::size_t n, double t) {
  return Packing(std::vector<double>(n, t));
}

Complex::Complex(int vertex_count, std::vector<Tetrahedron> tetrahedra)
    : vertex_count_(vertex_count), tets_(std::move(tetrahedra)) {
  if (vertex_count_ <= 0) throw DomainError("vertex_count must be positive");
  std::set<Tetrahedron> seen;
  degrees_.assign(vertex_count_, 0);
  for (std::size_t t = 0; t < tets_.size(); ++t) {
    const Tetrahedron s = sorted(tets_[t]);
    for (int v : s) {
      if (v < 0 || v >= vertex_count_) {
        throw DomainError("tetrahedron " + std::to_string(t) +
                          " references vertex " + std::to_string(v) +
                          " outside [0, " + std::to_string(vertex_count_) + ")");
      }
    }
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw DomainError("tetrahedron " + std::to_string(t) + " repeats a vertex");
    }
    if (!seen.insert(s).second) {
      throw DomainError("tetrahedron " + std::to_string(t) + " is a duplicate");
    }
    for (int v : s) ++degrees_[v];
  }
  for (int v = 0; v < vertex_count_; ++v) {
    if (degrees_[v] == 0)
      throw DomainError("vertex " + std::to_string(v) + " lies in no tetrahedron");
  }

  incidence_offsets_.assign(vertex_count_ + 1, 0);
  for (int v = 0; v < vertex_count_; ++v)
    incidence_offsets_[v + 1] = incidence_offsets_[v] + degrees_[v];
  incidence_.resize(incidence_offsets_.back());
  std::vector<std::size_t> fill(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
  for (std::size_t t = 0; t < tets_.size(); ++t)
    for (int v : tets_[t]) incidence_[fill[v]++] = t;
}

std::span<const std::size_t> Complex::incident(int v) const {
  return {incidence_.data() + incidence_offsets_[v],
          incidence_offsets_[v + 1] - incidence_offsets_[v]};
}

int Complex::min_degree() const {
  return *std::min_element(degrees_.begin(), degrees_.end());
}

int Complex::max_degree() const {
  return *std::max_element(degrees_.begin(), degrees_.end());
}

Radii4 Complex::tetra_radii(std::size_t t, const Packing& r,
                            RadiusBounds bounds) const {
  const Tetrahedron& tet = tets_[t];
  return Radii4({r[tet[0]], r[tet[1]], r[tet[2]], r[tet[3]]}, bounds);
}

std::vector<int> tetra_degrees(const Complex& c) { return c.tetra_degrees(); }

ValidationReport validate(const Complex& c) {
  ValidationReport report;

  std::map<std::array<int, 3>, int> triangle_uses;
  for (const Tetrahedron& t : c.tetrahedra()) {
    const Tetrahedron s = sorted(t);
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> f{};
      for (int m = 0, n = 0; m < 4; ++m)
        if (m != skip) f[n++] = s[m];
      ++triangle_uses[f];
    }
  }
  std::size_t tri_failures = 0;
  for (const auto& [f, uses] : triangle_uses) {
    if (uses != 2) {
      report.triangles_paired = false;
      note(report.failures, tri_failures,
           "triangle " + join({f[0], f[1], f[2]}) + " lies in " +
               std::to_string(uses) + " tetrahedra (expected 2)");
    }
  }

  check_edge_links(c, report);
  check_vertex_links(c, report);

  report.min_degree = c.min_degree();
  report.max_degree = c.max_degree();
  report.degree_at_least_23 = report.min_degree >= 23;
  report.degree_at_most_22 = report.max_degree <= 22;
  return report;
}

nlohmann::json to_json(const ValidationReport& report) {
  return {
      {"passed", report.passed()},
      {"triangles_paired", report.triangles_paired},
      {"edge_links_are_cycles", report.edge_links_are_cycles},
      {"vertex_links_connected", report.vertex_links_connected},
      {"vertex_links_spherical", report.vertex_links_spherical},
      {"vertex_link_euler", report.vertex_link_euler},
      {"min_degree", report.min_degree},
      {"max_degree", report.max_degree},
      {"degree_at_least_23", report.degree_at_least_23},
      {"degree_at_most_22", report.degree_at_most_22},
      {"failures", report.failures},
  };
}

Complex parse_complex(std::string_view text) {
  using Kind = ParseError::Kind;
  const nlohmann::json doc = parse_json(text);
  require_fields(doc, kTriFormat, {"format", "vertex_count", "tetrahedra"});

  const auto& n = doc.at("vertex_count");
  if (!n.is_number_integer() || n.get<long long>() <= 0) {
    throw ParseError(Kind::Schema, "vertex_count must be a positive integer");
  }
  const int vertex_count = n.get<int>();

  const auto& list = doc.at("tetrahedra");
  if (!list.is_array()) throw ParseError(Kind::Schema, "tetrahedra must be an array");
  std::vector<Tetrahedron> tets;
  tets.reserve(list.size());
  std::set<Tetrahedron> seen;
  for (std::size_t t = 0; t < list.size(); ++t) {
    const auto& entry = list[t];
    const std::string where = "tetrahedra[" + std::to_string(t) + "]";
    if (!entry.is_array() || entry.size() != 4) {
      throw ParseError(Kind::Schema, where + " must be a 4-element array");
    }
    Tetrahedron tet{};
    for (int m = 0; m < 4; ++m) {
      if (!entry[m].is_number_integer())
        throw ParseError(Kind::Schema, where + " entries must be integers");
      const long long v = entry[m].get<long long>();
      if (v < 0 || v >= vertex_count) {
        throw ParseError(Kind::IndexOutOfRange,
                         where + " references vertex " + std::to_string(v) +
                             " outside [0, " + std::to_string(vertex_count) + ")");
      }
      tet[m] = static_cast<int>(v);
    }
    const Tetrahedron s = sorted(tet);
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw ParseError(Kind::Schema, where + " repeats a vertex");
    if (!seen.insert(s).second)
      throw ParseError(Kind::DuplicateTetrahedron, where + " is a duplicate tetrahedron");
    tets.push_back(tet);
  }
  try {
    return Complex(vertex_count, std::move(tets));
  } catch (const DomainError& e) {
    throw ParseError(Kind::Schema, e.what());
  }
}

std::string serialize(const Complex& c) {
  std::ostringstream os;
  os << "{\n  \"format\": \"" << kTriFormat << "\",\n"
     << "  \"vertex_count\": " << c.vertex_count() << ",\n"
     << "  \"tetrahedra\": [";
  for (std::size_t t = 0; t < c.tetrahedron_count(); ++t) {
    const Tetrahedron& tet = c.tetrahedron(t);
    os << (t == 0 ? "\n" : ",\n") << "    [" << tet[0] << ", " << tet[1] << ", "
       << tet[2] << ", " << tet[3] << "]";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

Packing parse_packing(std::string_view text) {
  using Kind = ParseError::Kind;
  const nlohmann::json doc = parse_json(text);
  require_fields(doc, kPackingFormat, {"format", "radii"});
  const auto& radii = doc.at("radii");
  if (!radii.is_array() || radii.empty())
    throw ParseError(Kind::Schema, "radii must be a non-empty array");
  std::vector<double> r;
  for (const auto& v : radii) {
    if (!v.is_number()) throw ParseError(Kind::Schema, "radii entries must be numbers");
    r.push_back(v.get<double>());
  }
  try {
    return Packing(std::move(r));
  } catch (const DomainError& e) {
    throw ParseError(Kind::Schema, e.what());
  }
}

std::string serialize(const Packing& r) {
  nlohmann::json doc = {{"format", kPackingFormat}, {"radii", r.values()}};
  return doc.dump(2) + "\n";
}

Complex subdivide_tetrahedron(const Complex& c, std::size_t t) {
  if (t >= c.tetrahedron_count()) throw DomainError("tetrahedron index out of range");
  const int apex = c.vertex_count();
  std::vector<Tetrahedron> tets = c.tetrahedra();
  const Tetrahedron old = tets[t];
  for (int m = 0; m < 4; ++m) {
    Tetrahedron cone = old;
    cone[m] = apex;
    if (m == 0)
      tets[t] = cone;
    else
      tets.push_back(cone);
  }
  return Complex(apex + 1, std::move(tets));
}

}  // namespace yamabe3h
