#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "manifest.hpp"

using namespace yamabe3h;
using namespace yamabe3h::cli;

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic ball packings and the extended combinatorial Yamabe flow"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string tri, radii = "uniform:1";
  int degree = 0;
  bool hessian = false;

  auto* validate = app.add_subcommand("validate", "Closed-manifold checks on a triangulation");
  validate->add_option("tri", tri, "Triangulation file")->required();

  FlowArgs flow_args;
  std::string out_path, method = "rk4";
  auto* flow = app.add_subcommand("flow", "Integrate the extended Yamabe flow");
  flow->add_option("tri", tri, "Triangulation file")->required();
  flow->add_option("--radii", radii, "Packing file or uniform:t")->capture_default_str();
  flow->add_option("--dt", flow_args.config.dt, "Step (rk4) or initial step (dopri5)")
      ->capture_default_str();
  flow->add_option("--t-max", flow_args.config.t_max, "Stop at this time")->capture_default_str();
  flow->add_option("--stop-tol", flow_args.config.stop_tol, "Stop once ||K||_inf is below")
      ->capture_default_str();
  flow->add_option("--out", out_path, "Trace CSV; a manifest is written beside it");
  flow->add_option("--stride", flow_args.config.output_stride, "Record every n-th step")
      ->capture_default_str();
  const std::map<std::string, StepMethod> methods{{"rk4", StepMethod::Rk4},
                                                  {"dopri5", StepMethod::AdaptiveDopri5}};
  flow->add_option("--method", method, "Fixed-step rk4 or adaptive dopri5")->check(CLI::IsMember({"rk4", "dopri5"}))
      ->capture_default_str();
  flow->add_option("--rel-tol", flow_args.config.rel_tol, "dopri5 relative tolerance")->capture_default_str();
  flow->add_option("--abs-tol", flow_args.config.abs_tol, "dopri5 absolute tolerance")->capture_default_str();
  flow->add_flag("!--no-energy", flow_args.config.record_energy, "Skip S_rel per sample");

  auto* solve = app.add_subcommand("solve_regular", "Flat uniform packing for tetra-degree d");
  solve->alias("solve-regular");
  solve->add_option("--degree,-d", degree)->required();

  auto* curv = app.add_subcommand("curvature", "Per-vertex extended curvature");
  curv->add_option("tri", tri)->required();
  curv->add_option("--radii", radii)->capture_default_str();

  auto* energy = app.add_subcommand("energy", "Relative energy, gradient and Hessian");
  energy->add_option("tri", tri)->required();
  energy->add_option("--radii", radii)->capture_default_str();
  energy->add_flag("--hessian", hessian);

  auto* selfcheck = app.add_subcommand("selfcheck", "Built-in numerical self-tests");

  std::string kind;
  auto* gen = app.add_subcommand("generate", "Write a regular 4-polytope boundary");
  gen->add_option("kind", kind)
      ->required()
      ->check(CLI::IsMember({"pentachoron", "sixteen_cell", "six_hundred_cell"}));
  gen->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  std::ostream& os = std::cout;
  return guarded(os, [&]() -> int {
    if (*validate) return cmd_validate(tri, os);
    if (*flow) {
      flow_args.tri = tri;
      flow_args.radii = radii;
      flow_args.config.method = methods.at(method);
      if (!out_path.empty()) flow_args.out = out_path;
      return cmd_flow(flow_args, os);
    }
    if (*solve) return cmd_solve_regular(degree, os);
    if (*curv) return cmd_curvature(tri, radii, os);
    if (*energy) return cmd_energy(tri, radii, hessian, os);
    if (*selfcheck) return cmd_selfcheck(os);
    std::optional<std::filesystem::path> out;
    if (!out_path.empty()) out = out_path;
    return cmd_generate(kind, out, os);
  });
}
