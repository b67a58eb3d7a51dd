#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "yamabe3h/flow.hpp"

namespace yamabe3h::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kNumericFailure = 2, kInputError = 3 };

struct FlowArgs {
  std::filesystem::path tri;
  std::string radii = "uniform:1";
  std::optional<std::filesystem::path> out;
  FlowConfig config;
};

int cmd_validate(const std::filesystem::path& tri, std::ostream& os);
int cmd_flow(const FlowArgs& args, std::ostream& os);
int cmd_solve_regular(int degree, std::ostream& os);
int cmd_curvature(const std::filesystem::path& tri, const std::string& radii, std::ostream& os);
int cmd_energy(const std::filesystem::path& tri, const std::string& radii, bool hessian,
               std::ostream& os);
int cmd_selfcheck(std::ostream& os);
// Writes a generated complex ("pentachoron", "sixteen_cell", "six_hundred_cell").
int cmd_generate(const std::string& kind, const std::optional<std::filesystem::path>& out,
                 std::ostream& os);

// Runs a command body, turning library exceptions into the exit-code contract
// and a JSON error document on `os`.
template <class F>
int guarded(std::ostream& os, F&& body);

int report_error(std::ostream& os, const std::exception& e);

template <class F>
int guarded(std::ostream& os, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return report_error(os, e);
  }
}

}  // namespace yamabe3h::cli
