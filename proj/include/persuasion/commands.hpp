#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "persuasion/problem.hpp"

namespace persuasion {

using ReportTree = nlohmann::ordered_json;

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  ReportTree tree;
  std::vector<Table> tables;
  bool passed{true};  // false when a repro assertion failed
};

struct CommandOptions {
  std::string command;  // solve, elicit, audit, compare, repro
  std::string subject;  // repro target: value-of-info, warp, ind
  std::optional<std::string> model;
  std::optional<std::string> menu;
  std::optional<std::size_t> grid;
  std::optional<std::uint64_t> seed;
};

enum class OutputFormat { kTree, kTable, kBoth };

OutputFormat parse_format(const std::string& name);

/// Throws UnknownCommand for a command or repro target that does not exist.
void check_command(const CommandOptions& options);

/// Runs one command against a loaded problem. Throws Error on invalid input.
Report run_command(const Problem& problem, const CommandOptions& options);

/// Nine significant digits; non-finite values as "inf", "-inf", "nan".
std::string format_number(double x);

std::string to_csv(const Table& table);

/// Writes report.json and <table>.csv into `dir` (created when missing).
std::vector<std::filesystem::path> write_report(const Report& report, OutputFormat format,
                                                const std::filesystem::path& dir);
void print_report(const Report& report, OutputFormat format, std::ostream& out);

std::string_view tool_version();

}  // namespace persuasion
