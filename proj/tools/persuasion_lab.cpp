// persuasion-lab <command> --problem <path> [options]

#include <iostream>

#include "CLI11.hpp"
#include "persuasion/commands.hpp"

namespace {

constexpr int kExitFailedAssertion = 1;
constexpr int kExitError = 2;

}  // namespace

int main(int argc, char** argv) {
  using namespace persuasion;

  CLI::App app{"Menu-choice persuasion models: solve, elicit, audit, compare, reproduce."};
  app.set_version_flag("--version", std::string(tool_version()));

  std::string command;
  std::string subject;
  std::string problem_path;
  std::string model, menu, out_dir;
  std::size_t grid = 0;
  std::uint64_t seed = 0;
  std::string format = "tree";

  app.add_option("command", command, "solve | elicit | audit | compare | repro")->required();
  app.add_option("target", subject, "repro target: value-of-info | warp | ind");
  app.add_option("--problem", problem_path, "problem file")->required();
  auto* model_opt = app.add_option("--model", model, "model name from the problem file");
  auto* menu_opt = app.add_option("--menu", menu, "menu name from the problem file");
  auto* grid_opt = app.add_option("--grid", grid, "posterior grid resolution G")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "seed overriding the problem file");
  app.add_option("--out", out_dir, "directory for report.json and CSV tables");
  app.add_option("--format", format, "tree | table | both")->check(CLI::IsMember({"tree", "table", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    CommandOptions options;
    options.command = command;
    options.subject = subject;
    if (*model_opt) options.model = model;
    if (*menu_opt) options.menu = menu;
    if (*grid_opt) options.grid = grid;
    if (*seed_opt) options.seed = seed;
    check_command(options);
    const OutputFormat fmt = parse_format(format);

    const Problem problem = load_problem(problem_path);
    for (const auto& notice : problem.notices) std::cerr << "notice: " << notice << "\n";

    const Report report = run_command(problem, options);
    if (out_dir.empty()) {
      print_report(report, fmt, std::cout);
    } else {
      for (const auto& path : write_report(report, fmt, out_dir)) std::cout << path.string() << "\n";
    }
    if (!report.passed) {
      std::cerr << "repro assertion failed\n";
      return kExitFailedAssertion;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
