#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/audit.hpp"
#include "persuasion/workflows.hpp"

namespace persuasion {

struct NamedTaste {
  std::string name;
  Utility utility;
};

struct NamedModel {
  std::string name;
  ModelSpec spec;
};

struct ValueOfInfoSettings {
  std::string no_info_model{"no-info"};
  std::string full_info_model{"full-info"};
  std::string menu{"A"};
  double expected_no_info{0.0};
  double expected_full_info{0.0};
  double tol_no_info{1e-9};
  double tol_full_info{1e-12};
};

struct ChoiceSearchSettings {
  std::string model;
  std::size_t budget{10000};
  ChoiceRule rule;
};

/// A validated problem file. Utilities are normalized on load; every
/// tolerance and budget used by the commands lives here.
struct Problem {
  explicit Problem(Environment environment) : env(std::move(environment)) {}

  std::filesystem::path source;
  std::vector<std::string> outcomes;
  std::vector<std::string> states;
  Environment env;
  std::vector<double> raw_principal;
  std::vector<NamedTaste> tastes;
  std::vector<Menu> menus;  // labelled with their names
  std::vector<NamedModel> models;
  std::vector<std::string> notices;

  std::uint64_t seed{1};
  SolveOptions solve;
  AuditSpec audit;
  std::vector<std::string> audit_models;  // empty: every model
  std::vector<std::string> audit_axioms;  // empty: "1" .. "11"
  std::string elicit_model;
  ElicitationSettings elicit;
  std::string compare_model;
  ComparativeSettings compare;
  ValueOfInfoSettings value_of_info;
  ChoiceSearchSettings warp;
  ChoiceSearchSettings ind;
  double solve_tol{1e-9};  // singleton-neutrality and other solve checks

  const NamedModel& model(const std::string& name) const;
  const Menu& menu(const std::string& name) const;
  const Utility& taste(const std::string& name) const;
  std::vector<Utility> taste_grid() const;
};

/// Parses the structured text (JSON, comments allowed). ParseError for
/// malformed text, ValidationError naming the offending field otherwise.
Problem parse_problem(const std::string& text, const std::filesystem::path& source = {});
Problem load_problem(const std::filesystem::path& path);

}  // namespace persuasion
