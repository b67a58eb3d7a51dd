#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "manifest.hpp"
#include "yamabe3h/complex.hpp"
#include "yamabe3h/energy.hpp"
#include "yamabe3h/errors.hpp"
#include "yamabe3h/geometry.hpp"

namespace yamabe3h::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Complex load_complex(const fs::path& path) { return parse_complex(read_file(path)); }

// "uniform:t" or a packing file.
Packing load_radii(const std::string& spec, const Complex& c) {
  constexpr std::string_view prefix = "uniform:";
  if (spec.starts_with(prefix)) {
    const std::string_view num = std::string_view(spec).substr(prefix.size());
    double t = 0.0;
    const auto [end, ec] = std::from_chars(num.data(), num.data() + num.size(), t);
    if (ec != std::errc() || end != num.data() + num.size()) {
      throw DomainError("bad radius in '" + spec + "'");
    }
    return Packing::uniform(static_cast<std::size_t>(c.vertex_count()), t);
  }
  Packing p = parse_packing(read_file(spec));
  if (p.size() != static_cast<std::size_t>(c.vertex_count())) {
    throw DomainError("packing file has " + std::to_string(p.size()) +
                      " radii, complex has " + std::to_string(c.vertex_count()) +
                      " vertices");
  }
  return p;
}

void emit(std::ostream& os, const json& doc) { os << doc.dump(2) << '\n'; }

std::string method_name(StepMethod m) {
  return m == StepMethod::Rk4 ? "rk4" : "dopri5";
}

json config_json(const FlowArgs& a) {
  const FlowConfig& c = a.config;
  return {{"tri", a.tri.string()},
          {"radii", a.radii},
          {"method", method_name(c.method)},
          {"dt", c.dt},
          {"rel_tol", c.rel_tol},
          {"abs_tol", c.abs_tol},
          {"t_max", c.t_max},
          {"stop_tol", c.stop_tol},
          {"output_stride", c.output_stride},
          {"record_energy", c.record_energy},
          {"detect_decay", c.detect_decay},
          {"refine_at_boundary", c.refine_at_boundary},
          {"decay_threshold", c.decay_threshold},
          {"decay_window", c.decay_window}};
}

struct Check {
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

Check jacobian_at_unit() {
  const Matrix4 jac = solid_angle_jacobian(Radii4({1.0, 1.0, 1.0, 1.0}));
  const double ch = std::cosh(2.0), sh = std::sinh(2.0);
  const double c =
      2.0 * sh / ((ch - 1.0) * (2.0 * ch + 1.0) * std::sqrt(1.0 + 4.0 * ch + 3.0 * ch * ch));
  double dev = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      dev = std::max(dev, std::abs(jac(a, b) - c * (a == b ? -3.0 * ch : 1.0)));
  const Eigen::SelfAdjointEigenSolver<Matrix4> eig(jac);
  const bool negative = eig.eigenvalues().maxCoeff() < 0.0;
  return {"jacobian_at_unit_packing", dev, 1e-10, dev < 1e-10 && negative};
}

Check cofactor_sweep(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_r(std::log(0.05), std::log(5.0));
  double dev = 0.0;
  for (int n = 0; n < 10000;) {
    const Radii4 r({std::exp(log_r(rng)), std::exp(log_r(rng)), std::exp(log_r(rng)),
                    std::exp(log_r(rng))});
    if (!(q_value(r) > 0.0)) continue;
    ++n;
    for (const auto& [i, j] : kEdges)
      dev = std::max(dev, std::abs(dihedral_cos_cofactor(r, i, j) - dihedral_cos_closed(r, i, j)));
  }
  return {"cofactor_vs_closed_form", dev, 1e-10, dev < 1e-10};
}

Check gradient_sweep(std::mt19937_64& rng) {
  const Complex c = generate(GeneratorKind::Pentachoron);
  std::uniform_real_distribution<double> big(0.2, 3.0), tiny(0.01, 0.05);
  const double h = 1e-4;
  double worst = 0.0;
  for (int n = 0; n < 10; ++n) {
    std::vector<double> r(5);
    for (double& v : r) v = big(rng);
    if (n % 2 == 1) r[n % 5] = tiny(rng);
    const std::vector<double> k = curvature(c, Packing(r));
    double err = 0.0, scale = 1.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      std::vector<double> up = r, down = r;
      up[i] += h;
      down[i] -= h;
      const double fd = (total_energy_rel(c, Packing(up)).s_rel -
                         total_energy_rel(c, Packing(down)).s_rel) / (2 * h);
      err = std::max(err, std::abs(fd - k[i]));
      scale = std::max(scale, std::abs(k[i]));
    }
    worst = std::max(worst, err / scale);
  }
  return {"energy_gradient_is_curvature", worst, 1e-5, worst < 1e-5};
}

}  // namespace

int report_error(std::ostream& os, const std::exception& e) {
  json doc = {{"status", "error"}, {"error", e.what()}};
  int code = kInputError;
  if (const auto* p = dynamic_cast<const ParseError*>(&e); p && p->kind == ParseError::Kind::Syntax) {
    doc["line"] = p->line;
    doc["column"] = p->column;
  }
  if (dynamic_cast<const NoSolutionError*>(&e) || dynamic_cast<const HypothesisError*>(&e)) {
    code = kNegative;
  } else if (dynamic_cast<const NumericError*>(&e) || dynamic_cast<const NearBoundaryError*>(&e)) {
    code = kNumericFailure;
  }
  doc["exit_code"] = code;
  emit(os, doc);
  std::cerr << "yamabe3h: " << e.what() << '\n';
  return code;
}

int cmd_validate(const fs::path& tri, std::ostream& os) {
  const ValidationReport report = validate(load_complex(tri));
  json doc = to_json(report);
  doc["file"] = tri.string();
  emit(os, doc);
  return report.passed() ? kOk : kNegative;
}

int cmd_flow(const FlowArgs& args, std::ostream& os) {
  args.config.validate();
  const Complex c = load_complex(args.tri);
  const Packing r0 = load_radii(args.radii, c);
  const FlowTrace trace = integrate(c, r0, args.config);

  json summary = summary_json(trace);
  summary["config"] = config_json(args);
  if (args.out) {
    {
      std::ofstream csv(*args.out, std::ios::binary);
      if (!csv) throw DomainError("cannot write " + args.out->string());
      write_csv(csv, trace);
    }
    RunManifest m{"flow", {args.tri}, {*args.out}, config_json(args),
                  std::string(to_string(trace.status))};
    if (!args.radii.starts_with("uniform:")) m.inputs.emplace_back(args.radii);
    write_manifests(m);
    summary["csv"] = args.out->string();
  }
  emit(os, summary);
  return trace.status == FlowStatus::NumericFailure ? kNumericFailure : kOk;
}

int cmd_solve_regular(int degree, std::ostream& os) {
  const double t0 = solve_regular(degree);
  const double alpha = regular_solid_angle(t0);
  emit(os, {{"degree", degree},
            {"t0", t0},
            {"alpha", alpha},
            {"residual", std::abs(alpha - kFourPi / degree)}});
  return kOk;
}

int cmd_curvature(const fs::path& tri, const std::string& radii, std::ostream& os) {
  const Complex c = load_complex(tri);
  const Packing r = load_radii(radii, c);
  const std::vector<double> k = curvature(c, r);
  std::size_t virtual_count = 0;
  for (const TetraClass& cls : classify_all(c, r)) virtual_count += cls.is_virtual();
  emit(os, {{"curvature", k}, {"virtual_count", virtual_count}});
  return kOk;
}

int cmd_energy(const fs::path& tri, const std::string& radii, bool hessian, std::ostream& os) {
  const Complex c = load_complex(tri);
  emit(os, to_json(total_energy_rel(c, load_radii(radii, c), hessian)));
  return kOk;
}

int cmd_selfcheck(std::ostream& os) {
  std::mt19937_64 rng(20190501);
  std::vector<Check> checks;
  checks.push_back(jacobian_at_unit());
  checks.push_back(cofactor_sweep(rng));
  checks.push_back(gradient_sweep(rng));

  json list = json::array();
  bool all = true;
  for (const Check& ch : checks) {
    list.push_back({{"name", ch.name}, {"value", ch.value}, {"tolerance", ch.tolerance},
                    {"passed", ch.passed}});
    if (!ch.passed) {
      all = false;
      std::cerr << "yamabe3h: selfcheck failed: " << ch.name << '\n';
    }
  }
  emit(os, {{"passed", all}, {"checks", list}});
  return all ? kOk : kNumericFailure;
}

int cmd_generate(const std::string& kind, const std::optional<fs::path>& out, std::ostream& os) {
  const std::string text = serialize(generate(kind));
  if (!out) {
    os << text;
    return kOk;
  }
  {
    std::ofstream file(*out, std::ios::binary);
    if (!file) throw DomainError("cannot write " + out->string());
    file << text;
  }
  write_manifests({"generate", {}, {*out}, {{"kind", kind}}, "ok"});
  return kOk;
}

}  // namespace yamabe3h::cli
