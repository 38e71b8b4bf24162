#pragma once

#include "nlbvp/problem.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace nlbvp {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int parse_error = 2;
inline constexpr int unsolved = 3;
inline constexpr int guiding_violation = 4;
inline constexpr int degree_inconclusive = 5;
}  // namespace exit_code

/// Command-line overrides applied on top of the problem file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_n;
  std::optional<Method> method;
};

struct CommandResult {
  int exit_code = exit_code::ok;
  nlohmann::ordered_json report;
  std::string csv;  // trajectory, solve only
};

void apply_overrides(ProblemSpec& spec, const Overrides& overrides);

CommandResult run_solve(const ProblemSpec& spec);
CommandResult run_verify(const ProblemSpec& spec);
CommandResult run_bounds(const ProblemSpec& spec);
CommandResult run_degree(const ProblemSpec& spec);

/// Loads `path`, applies overrides and dispatches on `command`. Parse errors
/// map to exit 2 with {"error": ...}.
CommandResult run_command(const std::string& command, const std::string& path, const Overrides& overrides);

}  // namespace nlbvp
