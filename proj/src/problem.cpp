#include "persuasion/problem.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace persuasion {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& reason) {
  throw Error(ErrorCode::kValidationError, path + ": " + reason);
}

// Runs `make`, turning library errors into ValidationError on `path`.
template <typename F>
auto guarded(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kValidationError) throw;
    invalid(path, e.what());
  } catch (const Json::exception& e) {
    invalid(path, e.what());
  }
}

/// JSON node with the field path used in diagnostics.
class Node {
 public:
  Node(const Json& json, std::string path) : json_(json), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const Json& json() const { return json_; }
  bool has(const std::string& key) const { return json_.is_object() && json_.contains(key); }

  Node at(const std::string& key) const {
    if (!json_.is_object()) invalid(path_, "expected an object");
    if (!json_.contains(key)) invalid(join(key), "missing field");
    return Node(json_.at(key), join(key));
  }
  std::optional<Node> find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
  }
  std::vector<Node> items() const {
    if (!json_.is_array()) invalid(path_, "expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < json_.size(); ++i) out.emplace_back(json_[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }
  std::vector<std::pair<std::string, Node>> fields() const {
    if (!json_.is_object()) invalid(path_, "expected an object");
    std::vector<std::pair<std::string, Node>> out;
    for (auto it = json_.begin(); it != json_.end(); ++it) out.emplace_back(it.key(), Node(it.value(), join(it.key())));
    return out;
  }

  double number() const {
    if (!json_.is_number()) invalid(path_, "expected a number");
    const double x = json_.get<double>();
    if (!std::isfinite(x)) invalid(path_, "expected a finite number");
    return x;
  }
  double positive() const {
    const double x = number();
    if (!(x > 0.0)) invalid(path_, "expected a positive number");
    return x;
  }
  std::size_t count() const {
    if (!json_.is_number_unsigned() && !(json_.is_number_integer() && json_.get<long long>() >= 0)) {
      invalid(path_, "expected a non-negative integer");
    }
    return json_.get<std::size_t>();
  }
  bool boolean() const {
    if (!json_.is_boolean()) invalid(path_, "expected true or false");
    return json_.get<bool>();
  }
  std::string string() const {
    if (!json_.is_string()) invalid(path_, "expected a string");
    return json_.get<std::string>();
  }
  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& item : items()) out.push_back(item.number());
    return out;
  }
  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (const auto& item : items()) out.push_back(item.string());
    return out;
  }

 private:
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json& json_;
  std::string path_;
};

void check_size(const Node& node, std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    invalid(node.path(), "expected " + std::to_string(want) + " " + what + ", got " + std::to_string(got));
  }
}

Belief read_belief(const Node& node, std::size_t states) {
  const auto p = node.numbers();
  check_size(node, p.size(), states, "probabilities");
  return guarded(node.path(), [&] { return Belief(p); });
}

Lottery read_lottery(const Node& node, std::size_t outcomes) {
  const auto p = node.numbers();
  check_size(node, p.size(), outcomes, "probabilities");
  return guarded(node.path(), [&] { return Lottery(p); });
}

class Reader {
 public:
  explicit Reader(Problem& problem) : p_(problem) {}

  std::size_t states() const { return p_.states.size(); }
  std::size_t outcomes() const { return p_.outcomes.size(); }

  Utility taste_named(const Node& node) const {
    const auto name = node.string();
    for (const auto& t : p_.tastes) {
      if (t.name == name) return t.utility;
    }
    invalid(node.path(), "unknown taste '" + name + "'");
  }

  // {"taste name": weight, ...}
  TasteDistribution distribution(const Node& node) const {
    std::vector<Utility> support;
    std::vector<double> weights;
    for (const auto& [name, w] : node.fields()) {
      support.push_back(taste_named(Node(Json(name), node.path())));
      weights.push_back(w.number());
    }
    if (support.empty()) invalid(node.path(), "empty distribution");
    return guarded(node.path(), [&] { return TasteDistribution(support, weights); });
  }

  // "uninformative", "full-information" or {"posteriors": [...], "weights": [...]}
  SignalStructure signal(const Node& node) const {
    if (node.json().is_string()) {
      const auto name = node.string();
      if (name == "uninformative") return SignalStructure::uninformative(p_.env.prior);
      if (name == "full-information") return full_information(p_.env.prior);
      invalid(node.path(), "unknown signal '" + name + "'");
    }
    std::vector<Belief> posts;
    for (const auto& q : node.at("posteriors").items()) posts.push_back(read_belief(q, states()));
    const auto weights = node.at("weights").numbers();
    check_size(node.at("weights"), weights.size(), posts.size(), "weights");
    auto tau = guarded(node.path(), [&] { return SignalStructure(posts, weights); });
    if (!tau.is_bayes_plausible(p_.env.prior)) invalid(node.path(), "posteriors do not average to the prior");
    return tau;
  }

  PosteriorCostSpec posterior_cost(const Node& node) const {
    const auto kind = node.at("kind").string();
    if (kind == "constraint") {
      const auto members = node.find("members");
      if (!members) return PosteriorCostSpec::full_constraint();
      std::vector<SignalStructure> list;
      for (const auto& m : members->items()) list.push_back(signal(m));
      if (list.empty()) invalid(members->path(), "constraint set must be nonempty");
      return guarded(node.path(), [&] { return PosteriorCostSpec::finite_constraint(list); });
    }
    if (kind == "separable") {
      const auto psi_name = node.at("psi").string();
      Psi psi = Psi::kEntropy;
      if (psi_name == "quadratic") {
        psi = Psi::kQuadratic;
      } else if (psi_name != "entropy") {
        invalid(node.at("psi").path(), "expected entropy or quadratic");
      }
      const double kappa = node.at("kappa").positive();
      return guarded(node.path(), [&] { return PosteriorCostSpec::separable(psi, kappa, states()); });
    }
    invalid(node.at("kind").path(), "expected constraint or separable");
  }

  TasteCostSpec taste_cost(const Node& node) const {
    const auto kind = node.at("kind").string();
    const auto grid = p_.taste_grid();
    const auto reference = distribution(node.at("reference"));
    if (kind == "fixed") return guarded(node.path(), [&] { return TasteCostSpec::fixed(grid, reference); });
    if (kind == "divergence") {
      const double kappa = node.at("kappa").positive();
      return guarded(node.path(), [&] { return TasteCostSpec::divergence(grid, reference, kappa); });
    }
    if (kind == "linear") {
      std::vector<double> penalty(grid.size(), 0.0);
      for (const auto& [name, value] : node.at("penalty").fields()) {
        bool found = false;
        for (std::size_t i = 0; i < p_.tastes.size(); ++i) {
          if (p_.tastes[i].name == name) {
            penalty[i] = value.number();
            found = true;
          }
        }
        if (!found) invalid(value.path(), "unknown taste '" + name + "'");
      }
      return guarded(node.path(), [&] { return TasteCostSpec::linear(grid, reference, penalty); });
    }
    invalid(node.at("kind").path(), "expected fixed, linear or divergence");
  }

  ModelSpec model(const Node& node) const {
    const auto kind = node.at("kind").string();
    auto gamma = [&] {
      return node.has("posterior_cost") ? posterior_cost(node.at("posterior_cost")) : PosteriorCostSpec::full_constraint();
    };
    auto spec = [&]() -> ModelSpec {
      if (kind == "known-bias") return ModelSpec::known_bias(taste_named(node.at("taste")), gamma());
      if (kind == "uncertain-bias") return ModelSpec::uncertain_bias(distribution(node.at("lambda")), gamma());
      if (kind == "costly") return ModelSpec::costly(posterior_cost(node.at("posterior_cost")), distribution(node.at("lambda")));
      if (kind == "sequential") {
        return ModelSpec::sequential(posterior_cost(node.at("posterior_cost")), taste_cost(node.at("taste_cost")));
      }
      if (kind == "fixed-info") return ModelSpec::fixed_info(signal(node.at("signal")), taste_cost(node.at("taste_cost")));
      if (kind == "no-info") return ModelSpec::no_info(p_.env.prior, taste_cost(node.at("taste_cost")));
      if (kind == "costly-known-bias") {
        return ModelSpec::costly_known_bias(posterior_cost(node.at("posterior_cost")), taste_named(node.at("taste")));
      }
      if (kind == "costly-no-bias") return ModelSpec::costly_no_bias(posterior_cost(node.at("posterior_cost")), p_.env.principal);
      if (kind == "delegation") {
        if (const auto joint = node.find("joint")) {
          const double kappa = joint->at("kappa").positive();
          std::vector<JointAtom> atoms;
          for (const auto& atom : joint->at("reference").items()) {
            atoms.push_back(JointAtom{read_belief(atom.at("posterior"), states()), taste_named(atom.at("taste")),
                                      atom.at("weight").number()});
          }
          auto reference = guarded(joint->path(), [&] { return JointDistribution(atoms); });
          return ModelSpec::delegation(DivergenceJointSpec{kappa, std::move(reference)});
        }
        return ModelSpec::delegation(JointCostSpec{posterior_cost(node.at("posterior_cost")), taste_cost(node.at("taste_cost"))});
      }
      invalid(node.at("kind").path(), "unknown model kind '" + kind + "'");
    };
    return guarded(node.path(), spec);
  }

 private:
  Problem& p_;
};

void read_choice_search(const Node& node, ChoiceSearchSettings& out) {
  if (const auto m = node.find("model")) out.model = m->string();
  if (const auto b = node.find("budget")) out.budget = b->count();
  if (const auto t = node.find("threshold")) out.rule.threshold = t->number();
  if (const auto t = node.find("margin")) out.rule.margin = t->number();
}

}  // namespace

const NamedModel& Problem::model(const std::string& name) const {
  for (const auto& m : models) {
    if (m.name == name) return m;
  }
  throw Error(ErrorCode::kValidationError, "models: unknown model '" + name + "'");
}

const Menu& Problem::menu(const std::string& name) const {
  for (const auto& m : menus) {
    if (m.label() == name) return m;
  }
  throw Error(ErrorCode::kValidationError, "menus: unknown menu '" + name + "'");
}

const Utility& Problem::taste(const std::string& name) const {
  for (const auto& t : tastes) {
    if (t.name == name) return t.utility;
  }
  throw Error(ErrorCode::kValidationError, "tastes: unknown taste '" + name + "'");
}

std::vector<Utility> Problem::taste_grid() const {
  std::vector<Utility> out;
  for (const auto& t : tastes) out.push_back(t.utility);
  return out;
}

Problem parse_problem(const std::string& text, const std::filesystem::path& source) {
  Json json;
  try {
    json = Json::parse(text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kParseError, source.string() + ": " + e.what());
  }
  const Node root(json, "");
  const auto outcomes = root.at("outcomes").strings();
  const auto states = root.at("states").strings();
  const Belief prior = read_belief(root.at("prior"), states.size());
  const auto raw = root.at("principal").numbers();
  check_size(root.at("principal"), raw.size(), outcomes.size(), "weights");
  const Utility principal = guarded("principal", [&] { return normalize_utility(raw); });

  Problem p(Environment{prior, principal});
  p.source = source;
  p.outcomes = outcomes;
  p.states = states;
  p.raw_principal = raw;
  auto note_normalized = [&](const std::string& what, const std::vector<double>& w, const Utility& u) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::abs(w[i] - u[i]) > 1e-12) {
        std::ostringstream os;
        os.precision(9);
        os << what << " normalized to (";
        for (std::size_t j = 0; j < u.size(); ++j) os << (j ? ", " : "") << u[j];
        os << ")";
        p.notices.push_back(os.str());
        return;
      }
    }
  };
  note_normalized("principal", raw, principal);

  if (const auto solve = root.find("solve")) {
    if (const auto g = solve->find("grid")) p.solve.resolution = g->count();
    if (const auto b = solve->find("kink_enrichment")) p.solve.kink_enrichment = b->boolean();
    if (const auto b = solve->find("refinement_check")) p.solve.refinement_check = b->boolean();
    if (const auto t = solve->find("tie_tol")) p.env.tie_tol = t->positive();
    if (const auto t = solve->find("tol")) p.solve_tol = t->positive();
  }
  if (const auto s = root.find("seed")) p.seed = s->count();

  if (const auto tastes = root.find("tastes")) {
    for (const auto& t : tastes->items()) {
      const auto name = t.at("name").string();
      const auto w = t.at("weights").numbers();
      check_size(t.at("weights"), w.size(), outcomes.size(), "weights");
      for (const auto& other : p.tastes) {
        if (other.name == name) invalid(t.at("name").path(), "duplicate taste '" + name + "'");
      }
      const Utility u = guarded(t.at("weights").path(), [&] { return normalize_utility(w); });
      note_normalized("taste " + name, w, u);
      p.tastes.push_back({name, u});
    }
  }

  for (const auto& m : root.at("menus").items()) {
    const auto name = m.at("name").string();
    for (const auto& other : p.menus) {
      if (other.label() == name) invalid(m.at("name").path(), "duplicate menu '" + name + "'");
    }
    std::vector<Act> acts;
    for (const auto& a : m.at("acts").items()) {
      if (const auto c = a.find("constant")) {
        acts.push_back(Act::constant(read_lottery(*c, outcomes.size()), states.size()));
        continue;
      }
      std::vector<Lottery> rows;
      const auto per_state = a.at("lotteries").items();
      check_size(a.at("lotteries"), per_state.size(), states.size(), "lotteries");
      for (const auto& row : per_state) rows.push_back(read_lottery(row, outcomes.size()));
      acts.emplace_back(std::move(rows));
    }
    if (acts.empty()) invalid(m.at("acts").path(), "menu needs at least one act");
    p.menus.push_back(guarded(m.path(), [&] { return Menu(std::move(acts), name); }));
  }

  const Reader reader(p);
  for (const auto& m : root.at("models").items()) {
    const auto name = m.at("name").string();
    for (const auto& other : p.models) {
      if (other.name == name) invalid(m.at("name").path(), "duplicate model '" + name + "'");
    }
    p.models.push_back({name, reader.model(m)});
  }

  auto model_ref = [&](const Node& node) {
    const auto name = node.string();
    for (const auto& m : p.models) {
      if (m.name == name) return name;
    }
    invalid(node.path(), "unknown model '" + name + "'");
  };

  if (const auto audit = root.find("audit")) {
    if (const auto ms = audit->find("models")) {
      for (const auto& m : ms->items()) p.audit_models.push_back(model_ref(m));
    }
    if (const auto ids = audit->find("axioms")) {
      for (const auto& id : ids->items()) {
        const auto s = id.string();
        guarded(id.path(), [&] { return axiom_name(s); });
        p.audit_axioms.push_back(s);
      }
    }
    if (const auto x = audit->find("count")) p.audit.count = x->count();
    if (const auto x = audit->find("max_acts")) p.audit.max_acts = x->count();
    if (const auto x = audit->find("tol")) p.audit.tol = x->positive();
    if (const auto x = audit->find("continuity_points")) p.audit.continuity_points = x->count();
    if (const auto x = audit->find("continuity_slack")) p.audit.continuity_slack = x->number();
  }

  if (const auto e = root.find("elicit")) {
    auto& s = p.elicit;
    if (const auto x = e->find("model")) p.elicit_model = model_ref(*x);
    if (const auto x = e->find("tau_samples")) s.tau_samples = x->count();
    if (const auto x = e->find("lambda_samples")) s.lambda_samples = x->count();
    if (const auto x = e->find("family_count")) s.family_count = x->count();
    if (const auto x = e->find("max_acts")) s.max_acts = x->count();
    if (const auto x = e->find("witness_scale")) s.witness_scale = x->positive();
    if (const auto x = e->find("tol")) s.tol = x->positive();
    if (const auto x = e->find("round_trip")) s.round_trip = x->boolean();
    if (const auto x = e->find("lattice")) s.lattice = x->count();
    if (const auto x = e->find("calibration_menus")) s.calibration_menus = x->count();
    if (const auto x = e->find("heldout_menus")) s.heldout_menus = x->count();
    if (const auto x = e->find("budget_factor")) s.budget_factor = x->positive();
    if (const auto x = e->find("budget_floor")) s.budget_floor = x->positive();
  }

  if (const auto c = root.find("compare")) {
    auto& s = p.compare;
    if (const auto x = c->find("model")) p.compare_model = model_ref(*x);
    if (const auto x = c->find("constant_menus")) s.constant_menus = x->count();
    if (const auto x = c->find("menus")) s.menus = x->count();
    if (const auto x = c->find("tau_samples")) s.tau_samples = x->count();
    if (const auto x = c->find("lambda_samples")) s.lambda_samples = x->count();
    if (const auto x = c->find("family_count")) s.family_count = x->count();
    if (const auto x = c->find("max_acts")) s.max_acts = x->count();
    if (const auto x = c->find("rotation")) s.rotation = x->number();
    if (const auto x = c->find("tol")) s.tol = x->positive();
  }

  if (const auto r = root.find("repro")) {
    if (const auto v = r->find("value_of_info")) {
      auto& s = p.value_of_info;
      if (const auto x = v->find("no_info_model")) s.no_info_model = model_ref(*x);
      if (const auto x = v->find("full_info_model")) s.full_info_model = model_ref(*x);
      if (const auto x = v->find("menu")) {
        s.menu = x->string();
        guarded(x->path(), [&] { return p.menu(s.menu).size(); });
      }
      if (const auto x = v->find("expected_no_info")) s.expected_no_info = x->number();
      if (const auto x = v->find("expected_full_info")) s.expected_full_info = x->number();
      if (const auto x = v->find("tol_no_info")) s.tol_no_info = x->positive();
      if (const auto x = v->find("tol_full_info")) s.tol_full_info = x->positive();
    }
    if (const auto w = r->find("warp")) read_choice_search(*w, p.warp);
    if (const auto w = r->find("ind")) read_choice_search(*w, p.ind);
  }
  return p;
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem(buffer.str(), path);
}

}  // namespace persuasion
