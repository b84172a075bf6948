#include "persuasion/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#ifndef PERSUASION_VERSION
#define PERSUASION_VERSION "0.0.0"
#endif

namespace persuasion {

namespace {

using Json = ReportTree;

constexpr const char* kNoneFound = "none found within budget";

double rounded(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // no negative zero
}

Json num(double x) {
  if (!std::isfinite(x)) return format_number(x);
  return rounded(x);
}

template <typename Span>
Json nums(const Span& xs) {
  Json out = Json::array();
  for (double x : xs) out.push_back(num(x));
  return out;
}

std::string cell(bool b) { return b ? "true" : "false"; }
std::string cell(double x) { return format_number(x); }
std::string cell(std::size_t n) { return std::to_string(n); }

std::string join_numbers(std::span<const double> xs) {
  std::string out = "(";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + format_number(xs[i]);
  return out + ")";
}

/// Execution context shared by the commands.
class Session {
 public:
  Session(const Problem& problem, const CommandOptions& options) : p_(problem), o_(options) {
    options_ = problem.solve;
    if (options.grid) options_.resolution = *options.grid;
    seed_ = options.seed.value_or(problem.seed);
  }

  const Problem& problem() const { return p_; }
  const Environment& env() const { return p_.env; }
  const SolveOptions& solve_options() const { return options_; }
  std::uint64_t seed() const { return seed_; }
  const CommandOptions& options() const { return o_; }

  std::size_t resolution() const {
    return options_.resolution ? options_.resolution : default_grid_resolution(p_.states.size());
  }

  void record(const Diagnostics& d) {
    if (d.refinement_checked) refinement_delta_ = std::max(refinement_delta_.value_or(0.0), d.refinement_delta);
  }

  std::vector<const NamedModel*> models(const std::vector<std::string>& fallback = {}) const {
    std::vector<const NamedModel*> out;
    if (o_.model) {
      out.push_back(&p_.model(*o_.model));
    } else if (!fallback.empty()) {
      for (const auto& name : fallback) out.push_back(&p_.model(name));
    } else {
      for (const auto& m : p_.models) out.push_back(&m);
    }
    return out;
  }

  const NamedModel& single_model(const std::string& configured, const char* what) const {
    if (o_.model) return p_.model(*o_.model);
    if (!configured.empty()) return p_.model(configured);
    if (p_.models.size() == 1) return p_.models.front();
    throw Error(ErrorCode::kValidationError, std::string(what) + ".model: no model selected");
  }

  std::string taste_label(const Utility& u) const {
    for (const auto& t : p_.tastes) {
      if (t.utility.approx_equal(u, 1e-9)) return t.name;
    }
    if (p_.env.principal.approx_equal(u, 1e-9)) return "principal";
    return join_numbers(u.weights());
  }

  Json lambda_json(const TasteDistribution& lambda) const {
    Json out = Json::object();
    for (std::size_t i = 0; i < lambda.size(); ++i) out[taste_label(lambda.support()[i])] = num(lambda.weights()[i]);
    return out;
  }

  Json provenance() const {
    Json out;
    out["tool"] = "persuasion-lab";
    out["version"] = tool_version();
    out["problem"] = p_.source.filename().string();
    out["seed"] = seed_;
    out["grid"] = resolution();
    if (refinement_delta_) {
      out["refinement_delta"] = num(*refinement_delta_);
    } else {
      out["refinement_delta"] = "not checked";
    }
    return out;
  }

 private:
  const Problem& p_;
  const CommandOptions& o_;
  SolveOptions options_;
  std::uint64_t seed_{1};
  std::optional<double> refinement_delta_;
};

Json act_json(const Act& act) {
  Json rows = Json::array();
  for (std::size_t s = 0; s < act.states(); ++s) rows.push_back(nums(act.row(s)));
  return rows;
}

Json menu_json(const Menu& menu) {
  Json out;
  if (!menu.label().empty()) out["label"] = menu.label();
  Json acts = Json::array();
  for (const auto& a : menu.acts()) acts.push_back(act_json(a));
  out["acts"] = acts;
  return out;
}

Json signal_json(const Session& s, const Solution& sol) {
  Json out = Json::array();
  const auto& tau = sol.tau_star;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    Json atom;
    atom["posterior"] = nums(tau.posteriors()[i].probs());
    atom["weight"] = num(tau.weights()[i]);
    if (i < sol.lambda_star.size()) atom["lambda"] = s.lambda_json(sol.lambda_star[i]);
    out.push_back(atom);
  }
  return out;
}

Json diagnostics_json(const Diagnostics& d) {
  Json out;
  out["resolution"] = d.resolution;
  out["grid_points"] = d.grid_points;
  out["lp_residual"] = num(d.lp_residual);
  out["tie_diameter"] = num(d.tie_diameter);
  if (d.refinement_checked) {
    out["refinement_delta"] = num(d.refinement_delta);
  } else {
    out["refinement_delta"] = "not checked";
  }
  out["iterations"] = d.iterations;
  out["feasibility"] = d.feasibility;
  return out;
}

std::vector<std::string> state_columns(const Problem& p, std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back("p(" + p.states[i] + ")");
  return out;
}

// ------------------------------------------------------------------ solve

Report run_solve(Session& s) {
  const auto& p = s.problem();
  std::vector<const Menu*> menus;
  if (s.options().menu) {
    menus.push_back(&p.menu(*s.options().menu));
  } else {
    for (const auto& m : p.menus) menus.push_back(&m);
  }

  Report report;
  Table values{"values", {"model", "kind", "menu", "value", "grid_points", "lp_residual", "refinement_delta"}, {}};
  Table signals{"tau_star", {"model", "menu", "signal", "weight"}, {}};
  for (const auto& c : state_columns(p, p.states.size())) signals.header.push_back(c);
  std::vector<Table> profiles;
  Json results = Json::array();

  for (const auto* model : s.models()) {
    for (const auto* menu : menus) {
      const auto sol = solve_model(s.env(), model->spec, *menu, s.solve_options());
      s.record(sol.diagnostics);
      Json r;
      r["model"] = model->name;
      r["kind"] = model->spec.kind_name();
      r["menu"] = menu->label();
      r["value"] = num(sol.value);
      r["tau_star"] = signal_json(s, sol);
      r["choice"] = nums(within_menu_choice(s.env(), sol, *menu));
      r["diagnostics"] = diagnostics_json(sol.diagnostics);
      results.push_back(r);

      const auto& d = sol.diagnostics;
      values.rows.push_back({model->name, model->spec.kind_name(), menu->label(), cell(sol.value), cell(d.grid_points),
                             cell(d.lp_residual), d.refinement_checked ? cell(d.refinement_delta) : "not checked"});
      for (std::size_t i = 0; i < sol.tau_star.size(); ++i) {
        std::vector<std::string> row{model->name, menu->label(), cell(i), cell(sol.tau_star.weights()[i])};
        for (double q : sol.tau_star.posteriors()[i].probs()) row.push_back(cell(q));
        signals.rows.push_back(std::move(row));
      }

      if (model->spec.kind == ModelSpec::Kind::kKnownBias) {
        // Stage benefit b(p) on the plain lattice; the last coordinate is implied.
        const PosteriorGrid grid(p.states.size(), s.resolution(), p.env.prior);
        const auto profile = value_profile(
            [&](const Belief& q) { return stage_value(s.env(), model->spec, *menu, q); }, grid);
        Table t{"value_profile_" + model->name + "_" + menu->label(), state_columns(p, p.states.size() - 1), {}};
        t.header.push_back("b(p)");
        for (std::size_t i = 0; i < grid.lattice_size(); ++i) {
          std::vector<std::string> row;
          for (std::size_t j = 0; j + 1 < p.states.size(); ++j) row.push_back(cell(grid[i][j]));
          row.push_back(cell(profile.values[i]));
          t.rows.push_back(std::move(row));
        }
        profiles.push_back(std::move(t));
      }
    }
  }
  report.tree["results"] = results;
  report.tables.push_back(std::move(values));
  report.tables.push_back(std::move(signals));
  for (auto& t : profiles) report.tables.push_back(std::move(t));
  return report;
}

// ----------------------------------------------------------------- elicit

Json estimates_json(const std::vector<SampleEstimate>& xs) {
  Json out = Json::array();
  for (const auto& e : xs) {
    Json j;
    j["estimate"] = num(e.estimate);
    j["truth"] = e.truth ? num(*e.truth) : Json("inf");
    j["stratum"] = e.stratum;
    j["minimal"] = e.minimal;
    out.push_back(j);
  }
  return out;
}

Table estimates_table(const std::string& name, const std::vector<SampleEstimate>& xs) {
  Table t{name, {"sample", "estimate", "truth", "stratum", "minimal"}, {}};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& e = xs[i];
    t.rows.push_back({cell(i), cell(e.estimate), e.truth ? cell(*e.truth) : "inf", e.stratum, cell(e.minimal)});
  }
  return t;
}

Report run_elicit(Session& s) {
  const auto& p = s.problem();
  const auto& model = s.single_model(p.elicit_model, "elicit");
  auto settings = p.elicit;
  settings.seed = s.seed();
  const auto r = run_elicitation(s.env(), model.spec, settings, s.solve_options());
  const double tol = settings.tol;

  Report report;
  Json& t = report.tree;
  t["model"] = model.name;
  t["family"] = {{"size", r.family_size}, {"supporting", r.supporting}, {"conflict", r.conflict}};
  Json checks;
  checks["minimal"] = r.minimal;
  checks["grounded_posterior"] = num(r.grounded_posterior);
  checks["grounded_taste"] = num(r.grounded_taste);
  checks["monotonicity_violation"] = num(r.monotonicity_violation);
  checks["convexity_violation"] = num(r.convexity_violation);
  checks["tolerance"] = num(tol);
  t["checks"] = checks;
  if (r.round_trip.run) {
    const auto& rt = r.round_trip;
    t["round_trip"] = {{"calibration_error", num(rt.calibration_error)}, {"budget", num(rt.budget)},
                        {"heldout_max", num(rt.heldout_max)},           {"heldout_mean", num(rt.heldout_mean)},
                        {"within_budget", rt.within_budget}};
  }
  t["posterior_estimates"] = estimates_json(r.posterior);
  t["taste_estimates"] = estimates_json(r.taste);

  Table summary{"elicitation", {"check", "value", "tolerance", "pass"}, {}};
  summary.rows.push_back({"minimality", cell(r.minimal), "", cell(r.minimal)});
  auto bound = [&](const char* name, double v, double limit) {
    summary.rows.push_back({name, cell(v), cell(limit), cell(v <= limit)});
  };
  bound("grounded_posterior", r.grounded_posterior, tol);
  bound("grounded_taste", r.grounded_taste, tol);
  bound("monotonicity", r.monotonicity_violation, tol);
  bound("convexity", r.convexity_violation, tol);
  if (r.round_trip.run) bound("round_trip_heldout_max", r.round_trip.heldout_max, r.round_trip.budget);
  report.tables.push_back(std::move(summary));
  report.tables.push_back(estimates_table("posterior_estimates", r.posterior));
  report.tables.push_back(estimates_table("taste_estimates", r.taste));
  return report;
}

// ------------------------------------------------------------------ audit

Json witness_json(const AxiomWitness& w) {
  Json out;
  out["description"] = w.description;
  Json menus = Json::array();
  for (const auto& m : w.menus) menus.push_back(menu_json(m));
  out["menus"] = menus;
  out["values"] = nums(w.values);
  Json claims = Json::array();
  for (const auto& c : w.claims) {
    claims.push_back({{"terms", c.terms}, {"coefficients", nums(c.coefficients)}, {"constant", num(c.constant)},
                      {"strict", c.strict}});
  }
  out["claims"] = claims;
  Json extras = Json::array();
  for (const auto& e : w.extras) extras.push_back(nums(e.probs()));
  out["extras"] = extras;
  return out;
}

Report run_audit(Session& s) {
  const auto& p = s.problem();
  auto spec = p.audit;
  spec.seed = s.seed();
  spec.solve = s.solve_options();
  const auto ids = p.audit_axioms.empty()
                       ? std::vector<std::string>{"1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11"}
                       : p.audit_axioms;

  Report report;
  Table axioms{"axioms",
               {"model", "axiom", "name", "status", "samples", "antecedent_true", "secondary", "witness", "note"},
               {}};
  Table witnesses{"witnesses", {"model", "axiom", "description", "revalidated"}, {}};
  Json models = Json::array();
  for (const auto* model : s.models(p.audit_models)) {
    const auto audit = audit_model(s.env(), model->spec, ids, spec);
    Json m;
    m["model"] = model->name;
    m["kind"] = model->spec.kind_name();
    Json results = Json::array();
    Json found = Json::array();
    for (const auto& r : audit.results) {
      Json j;
      j["axiom"] = r.id;
      j["name"] = r.name;
      j["status"] = to_string(r.status);
      j["samples"] = r.samples;
      j["antecedent_true"] = r.antecedent_true;
      if (r.secondary) j["secondary"] = *r.secondary;
      if (!r.note.empty()) j["note"] = r.note;
      std::string witness_cell = "-";
      if (r.witness) {
        const bool ok = revalidate(s.env(), model->spec, *r.witness, spec.solve, spec.tol);
        witness_cell = ok ? "revalidated" : "not revalidated";
        Json w = witness_json(*r.witness);
        w["axiom"] = r.id;
        w["revalidated"] = ok;
        found.push_back(w);
        witnesses.rows.push_back({model->name, r.id, r.witness->description, cell(ok)});
      }
      results.push_back(j);
      axioms.rows.push_back({model->name, r.id, r.name, std::string(to_string(r.status)), cell(r.samples),
                             cell(r.antecedent_true), r.secondary ? cell(*r.secondary) : "-", witness_cell, r.note});
    }
    m["results"] = results;
    if (found.empty()) {
      m["witnesses"] = kNoneFound;
      witnesses.rows.push_back({model->name, "-", kNoneFound, "-"});
    } else {
      m["witnesses"] = found;
    }
    models.push_back(m);
  }
  report.tree["spec"] = {{"count", spec.count}, {"max_acts", spec.max_acts}, {"tol", num(spec.tol)}};
  report.tree["models"] = models;
  report.tables.push_back(std::move(axioms));
  report.tables.push_back(std::move(witnesses));
  return report;
}

// ---------------------------------------------------------------- compare

Json implication_json(const ImplicationCheck& c) {
  Json out{{"tested", c.tested}, {"antecedent_true", c.antecedent_true}, {"holds", c.holds}};
  if (!c.holds) {
    out["counterexample"] = c.counterexample;
    out["margin"] = num(c.margin);
  }
  return out;
}

Report run_compare(Session& s) {
  const auto& p = s.problem();
  const auto& model = s.single_model(p.compare_model, "compare");
  auto settings = p.compare;
  settings.seed = s.seed();
  const auto r = run_comparative_statics(s.env(), model.spec, settings, s.solve_options());

  Report report;
  report.tree["model"] = model.name;
  Table table{"comparisons",
              {"scenario", "taste_implication", "information_implication", "taste_cost_dominance",
               "posterior_cost_dominance", "constant_restrictions_match", "counterexample"},
              {}};
  Json scenarios = Json::array();
  auto add = [&](const char* name, const ComparisonReport& c) {
    Json j;
    j["scenario"] = name;
    j["taste"] = implication_json(c.taste);
    j["information"] = implication_json(c.information);
    j["taste_cost_dominance"] = c.taste_cost_dominance;
    j["posterior_cost_dominance"] = c.posterior_cost_dominance;
    j["constant_restrictions_match"] = c.constant_restrictions_match;
    j["same_principal"] = c.same_principal;
    if (!c.defects.empty()) j["defects"] = c.defects;
    scenarios.push_back(j);
    std::string counter = !c.taste.holds ? c.taste.counterexample : !c.information.holds ? c.information.counterexample : "-";
    table.rows.push_back({name, cell(c.taste.holds), cell(c.information.holds), cell(c.taste_cost_dominance),
                          cell(c.posterior_cost_dominance), cell(c.constant_restrictions_match), counter});
  };
  add("taste_cost_doubled", r.taste_doubled);
  add("posterior_cost_doubled", r.posterior_doubled);
  add("principal_rotated", r.rotated);
  report.tree["scenarios"] = scenarios;
  if (r.rotated_principal) report.tree["rotated_principal"] = nums(r.rotated_principal->weights());
  report.tables.push_back(std::move(table));
  return report;
}

// ------------------------------------------------------------------ repro

Report repro_value_of_info(Session& s) {
  const auto& p = s.problem();
  const auto& v = p.value_of_info;
  const auto& menu = p.menu(s.options().menu.value_or(v.menu));
  const auto ni = solve_model(s.env(), p.model(v.no_info_model).spec, menu, s.solve_options());
  const auto fi = solve_model(s.env(), p.model(v.full_info_model).spec, menu, s.solve_options());
  s.record(ni.diagnostics);
  s.record(fi.diagnostics);
  const double voi = fi.value - ni.value;
  const double expected_voi = v.expected_full_info - v.expected_no_info;

  Report report;
  Table t{"value_of_info", {"quantity", "value", "expected", "tolerance", "pass"}, {}};
  Json checks = Json::array();
  auto check = [&](const char* name, double value, double expected, double tol) {
    const bool ok = std::abs(value - expected) <= tol;
    report.passed = report.passed && ok;
    checks.push_back({{"quantity", name}, {"value", num(value)}, {"expected", num(expected)}, {"tolerance", num(tol)},
                      {"pass", ok}});
    t.rows.push_back({name, cell(value), cell(expected), cell(tol), cell(ok)});
  };
  check("U_no_info", ni.value, v.expected_no_info, v.tol_no_info);
  check("U_full_info", fi.value, v.expected_full_info, v.tol_full_info);
  check("value_of_information", voi, expected_voi, v.tol_no_info + v.tol_full_info);
  report.tree["menu"] = menu.label();
  report.tree["no_info_model"] = v.no_info_model;
  report.tree["full_info_model"] = v.full_info_model;
  report.tree["checks"] = checks;
  report.tree["full_info_tau_star"] = signal_json(s, fi);
  report.tables.push_back(std::move(t));
  return report;
}

Report repro_choice(Session& s, bool warp) {
  const auto& p = s.problem();
  const auto& settings = warp ? p.warp : p.ind;
  const auto& model = s.single_model(settings.model, warp ? "repro.warp" : "repro.ind");
  const auto search = warp ? find_warp_violation(s.env(), model.spec, s.seed(), settings.budget, settings.rule)
                           : find_ind_violation(s.env(), model.spec, s.seed(), settings.budget, settings.rule);

  Report report;
  Json& t = report.tree;
  t["model"] = model.name;
  t["budget"] = settings.budget;
  t["tried"] = search.tried;
  t["threshold"] = num(settings.rule.threshold);
  t["margin"] = num(settings.rule.margin);
  Table table{warp ? "warp" : "ind", {"model", "tried", "witness", "revalidated"}, {}};
  if (!search.witness) {
    report.passed = false;
    t["witness"] = kNoneFound;
    table.rows.push_back({model.name, cell(search.tried), kNoneFound, "-"});
  } else {
    const auto& w = *search.witness;
    const bool ok = warp ? revalidate_warp(s.env(), model.spec, w, settings.rule)
                         : revalidate_ind(s.env(), model.spec, w, settings.rule);
    report.passed = ok;
    Json j;
    j["description"] = w.description;
    j["larger"] = menu_json(w.larger);
    j["smaller"] = menu_json(w.smaller);
    j["choice_larger"] = nums(w.choice_larger);
    j["choice_smaller"] = nums(w.choice_smaller);
    if (!warp) j["alpha"] = num(w.alpha);
    j["revalidated"] = ok;
    t["witness"] = j;
    table.rows.push_back({model.name, cell(search.tried), w.description, cell(ok)});
  }
  report.tables.push_back(std::move(table));
  return report;
}

}  // namespace

std::string_view tool_version() { return PERSUASION_VERSION; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", rounded(x));
  return buf;
}

OutputFormat parse_format(const std::string& name) {
  if (name == "tree") return OutputFormat::kTree;
  if (name == "table") return OutputFormat::kTable;
  if (name == "both") return OutputFormat::kBoth;
  throw Error(ErrorCode::kValidationError, "format: expected tree, table or both");
}

void check_command(const CommandOptions& options) {
  static const std::vector<std::string> commands{"solve", "elicit", "audit", "compare", "repro"};
  static const std::vector<std::string> targets{"value-of-info", "warp", "ind"};
  if (std::find(commands.begin(), commands.end(), options.command) == commands.end()) {
    throw Error(ErrorCode::kUnknownCommand, "'" + options.command + "' (expected solve, elicit, audit, compare or repro)");
  }
  if (options.command == "repro" && std::find(targets.begin(), targets.end(), options.subject) == targets.end()) {
    throw Error(ErrorCode::kUnknownCommand,
                "repro target '" + options.subject + "' (expected value-of-info, warp or ind)");
  }
  if (options.command != "repro" && !options.subject.empty()) {
    throw Error(ErrorCode::kUnknownCommand, "unexpected argument '" + options.subject + "'");
  }
}

Report run_command(const Problem& problem, const CommandOptions& options) {
  check_command(options);
  Session session(problem, options);
  Report report;
  std::string command = options.command;
  if (options.command == "solve") {
    report = run_solve(session);
  } else if (options.command == "elicit") {
    report = run_elicit(session);
  } else if (options.command == "audit") {
    report = run_audit(session);
  } else if (options.command == "compare") {
    report = run_compare(session);
  } else if (options.command == "repro") {
    command += " " + options.subject;
    if (options.subject == "value-of-info") {
      report = repro_value_of_info(session);
    } else if (options.subject == "warp") {
      report = repro_choice(session, true);
    } else if (options.subject == "ind") {
      report = repro_choice(session, false);
    } else {
      throw Error(ErrorCode::kUnknownCommand, "repro target '" + options.subject + "' (expected value-of-info, warp or ind)");
    }
  } else {
    throw Error(ErrorCode::kUnknownCommand, "'" + options.command + "'");
  }

  Json tree;
  tree["command"] = command;
  tree["provenance"] = session.provenance();
  if (!problem.notices.empty()) tree["notices"] = problem.notices;
  if (options.command == "repro") tree["passed"] = report.passed;
  for (auto it = report.tree.begin(); it != report.tree.end(); ++it) tree[it.key()] = it.value();
  report.tree = std::move(tree);
  return report;
}

std::string to_csv(const Table& table) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + quote(cells[i]);
    out += "\n";
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

std::vector<std::filesystem::path> write_report(const Report& report, OutputFormat format,
                                                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
    written.push_back(path);
  };
  if (format != OutputFormat::kTable) emit(dir / "report.json", report.tree.dump(2) + "\n");
  if (format != OutputFormat::kTree) {
    for (const auto& t : report.tables) emit(dir / (t.name + ".csv"), to_csv(t));
  }
  return written;
}

void print_report(const Report& report, OutputFormat format, std::ostream& out) {
  if (format != OutputFormat::kTable) out << report.tree.dump(2) << "\n";
  if (format != OutputFormat::kTree) {
    for (const auto& t : report.tables) out << "# " << t.name << "\n" << to_csv(t);
  }
}

}  // namespace persuasion
