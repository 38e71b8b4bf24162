#include "nlbvp/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <utility>

namespace fs = std::filesystem;

namespace {

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal boundary-value problems for differential inclusions"};
  app.require_subcommand(1);

  std::string file;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_n;
  std::string method;

  const std::pair<const char*, const char*> commands[] = {
      {"solve", "solve the boundary-value problem and certify the result"},
      {"verify", "check guiding, potential and boundary-functional hypotheses"},
      {"bounds", "evaluate the growth, escape, a priori and invariant-ball bounds"},
      {"degree", "Brouwer degree of the field in the [degree] section"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", file, "problem file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "directory for report.json and trajectory.csv");
    sub->add_option("--seed", seed, "RNG seed (unsigned 64-bit)");
    sub->add_option("--grid-n", grid_n, "number of Euler steps");
    sub->add_option("--method", method, "solver method")
        ->check(CLI::IsMember({"fixed_point", "shooting", "continuation"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : nlbvp::exit_code::parse_error;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  nlbvp::Overrides overrides;
  overrides.seed = seed;
  overrides.grid_n = grid_n;
  if (!method.empty()) overrides.method = nlbvp::method_from_string(method);

  const nlbvp::CommandResult result = nlbvp::run_command(command, file, overrides);
  const std::string report = result.report.dump(2) + "\n";
  std::cout << report;

  if (out_dir.empty() && result.exit_code != nlbvp::exit_code::parse_error) {
    try {
      out_dir = nlbvp::load_problem(file).output_dir;
    } catch (const nlbvp::Error&) {
    }
  }
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    bool ok = !ec && write_file(fs::path(out_dir) / "report.json", report);
    if (ok && !result.csv.empty()) ok = write_file(fs::path(out_dir) / "trajectory.csv", result.csv);
    if (!ok) {
      std::cerr << "error: cannot write outputs to " << out_dir << "\n";
      return result.exit_code == 0 ? nlbvp::exit_code::failure : result.exit_code;
    }
  }
  if (result.report.contains("error"))
    std::cerr << "error: " << result.report["error"]["message"].get<std::string>() << "\n";
  return result.exit_code;
}
