// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "persuasion/audit.hpp"
#include "persuasion/commands.hpp"
#include "properties.hpp"

using namespace persuasion;
using namespace persuasion::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Problem fixture(const char* name) { return load_problem(std::string(PERSUASION_FIXTURE_DIR) + "/" + name); }

struct Outcome {
  bool pass{true};
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void run(int id, const char* title, double limit_seconds, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double elapsed = seconds_since(start);
  out.require(elapsed < limit_seconds, "runtime under " + std::to_string(limit_seconds) + " s");
  if (!out.pass) ++failures;
  std::printf("%s %d %s:%s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.str().c_str(), elapsed);
  std::fflush(stdout);
}

// ------------------------------------------------------------------------

void value_of_info(Outcome& out) {
  const auto p = fixture("value_of_info.problem");
  CommandOptions o;
  o.command = "repro";
  o.subject = "value-of-info";
  const auto report = run_command(p, o);
  const auto& menu = p.menu(p.value_of_info.menu);
  const double ni = menu_value(p.env, p.model(p.value_of_info.no_info_model).spec, menu, p.solve);
  const double fi = menu_value(p.env, p.model(p.value_of_info.full_info_model).spec, menu, p.solve);
  const double root_half = 1.0 / std::sqrt(2.0);
  out.detail << " U_ni=" << format_number(ni) << " U_fi=" << format_number(fi) << " VoI=" << format_number(fi - ni);
  out.require(report.passed, "repro assertions");
  out.require(std::abs(ni - root_half) <= 1e-9, "U_ni = 1/sqrt2 within 1e-9");
  out.require(std::abs(fi) <= 1e-12, "U_fi = 0 within 1e-12");
  out.require(std::abs((fi - ni) + root_half) <= 1e-9, "VoI = -1/sqrt2");
}

// Best combination of at most two grid values straddling p0 in coordinate 0.
double brute_force_two_point(const ValueProfile& profile, const Belief& prior) {
  const auto& grid = profile.grid;
  const double p0 = prior[0];
  double best = profile.values[grid.prior_index()];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double a = grid[i][0];
      const double b = grid[j][0];
      if (!(a < p0 && b > p0)) continue;
      const double w = (b - p0) / (b - a);
      best = std::max(best, w * profile.values[i] + (1.0 - w) * profile.values[j]);
    }
  }
  return best;
}

void concavification(Outcome& out) {
  Rng rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 3 + rng.index(3);
    const Belief prior = rng.belief(2);
    const Utility u = rng.utility(n);
    const Utility v = rng.utility(n);
    const Menu menu = rng.menu(2, n, 6);
    const Environment env{prior, u};
    const auto model = ModelSpec::known_bias(v, PosteriorCostSpec::full_constraint());
    const PosteriorGrid grid(2, 100, prior);
    const auto profile = value_profile([&](const Belief& q) { return stage_value(env, model, menu, q); }, grid);
    const double lp = concave_envelope_at(profile, prior).value;
    worst = std::max(worst, std::abs(lp - brute_force_two_point(profile, prior)));
  }
  out.detail << " 50 problems, max |LP - brute force| = " << format_number(worst);
  out.require(worst <= 1e-8, "agreement within 1e-8");
}

void nesting(Outcome& out) {
  Rng rng(33);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Belief prior = rng.belief(2);
    const Utility u = rng.utility(3);
    const Utility v = rng.utility(3);
    const Menu menu = rng.menu(2, 3, 5);
    const Environment env{prior, u};
    PosteriorCostSpec gamma = PosteriorCostSpec::full_constraint();
    if (i % 2 == 1) {
      // Two random two-point structures around the prior.
      std::vector<SignalStructure> members;
      for (int m = 0; m < 2; ++m) {
        const double a = rng.uniform(prior[0], 1.0);
        const double b = rng.uniform(0.0, prior[0]);
        const double w = (prior[0] - b) / (a - b);
        members.emplace_back(std::vector<Belief>{Belief({a, 1 - a}), Belief({b, 1 - b})}, std::vector<double>{w, 1 - w});
      }
      gamma = PosteriorCostSpec::finite_constraint(members);
    }
    const auto delta = TasteDistribution::degenerate(v);
    const double known = menu_value(env, ModelSpec::known_bias(v, gamma), menu);
    const double uncertain = menu_value(env, ModelSpec::uncertain_bias(delta, gamma), menu);
    const double costly = menu_value(env, ModelSpec::costly(gamma, delta), menu);
    const double sequential = menu_value(env, ModelSpec::sequential(gamma, TasteCostSpec::fixed({v}, delta)), menu);
    for (double x : {uncertain, costly, sequential}) worst = std::max(worst, std::abs(x - known));
  }
  out.detail << " 100 instances, max deviation " << format_number(worst);
  out.require(worst <= 1e-9, "identities within 1e-9");
}

void axiom_signature(Outcome& out) {
  const auto p = fixture("theorem_signature.problem");
  auto spec = p.audit;
  spec.seed = p.seed;
  spec.solve = p.solve;
  out.require(spec.count == 200, "200 tuples per axiom");
  const std::vector<std::string> ids{"1", "2", "3", "4", "5", "6", "7", "8", "9", "10", "11"};
  const std::vector<std::pair<std::string, int>> expected{
      {"known-bias", 12}, {"uncertain-bias", 11}, {"costly", 10}, {"sequential", 9}};
  std::size_t witnesses = 0;
  for (const auto& [name, first_violated] : expected) {
    const auto& model = p.model(name).spec;
    const auto report = audit_model(p.env, model, ids, spec);
    std::string pattern;
    for (const auto& r : report.results) {
      const int id = std::stoi(r.id);
      pattern += r.passes() ? 'P' : 'F';
      if (id < first_violated) out.require(r.passes(), name + " passes " + r.id);
      if (id == first_violated) {
        out.require(!r.passes() && r.witness.has_value(), name + " violates " + r.id + " with a witness");
      }
      if (r.witness) {
        ++witnesses;
        out.require(revalidate(p.env, model, *r.witness, spec.solve, 1e-7), name + " witness " + r.id + " revalidates");
      }
    }
    out.detail << " " << name << "=" << pattern;
  }
  out.detail << " witnesses revalidated=" << witnesses;
}

void elicitation(Outcome& out) {
  const auto p = fixture("elicitation_roundtrip.problem");
  auto settings = p.elicit;
  settings.seed = p.seed;
  const auto r = run_elicitation(p.env, p.model(p.elicit_model).spec, settings, p.solve);
  bool minimal = true;
  for (const auto& e : r.posterior) minimal = minimal && e.truth && e.estimate <= *e.truth;
  for (const auto& e : r.taste) minimal = minimal && (!e.truth || e.estimate <= *e.truth);
  out.detail << " samples=" << r.posterior.size() << "/" << r.taste.size() << " grounded="
             << format_number(std::max(r.grounded_posterior, r.grounded_taste))
             << " monotonicity=" << format_number(r.monotonicity_violation)
             << " convexity=" << format_number(r.convexity_violation)
             << " heldout_max=" << format_number(r.round_trip.heldout_max)
             << " budget=" << format_number(r.round_trip.budget);
  out.require(r.posterior.size() == 20 && r.taste.size() == 20, "20 samples of each cost");
  out.require(minimal && r.minimal, "minimality");
  out.require(r.grounded_posterior <= 1e-9 && r.grounded_taste <= 1e-9, "groundedness");
  out.require(r.monotonicity_violation <= 1e-9, "monotonicity");
  out.require(r.convexity_violation <= 1e-9, "convexity");
  out.require(r.round_trip.run && settings.heldout_menus == 50, "round trip on 50 held-out menus");
  out.require(r.round_trip.within_budget, "held-out error within budget");
  out.require(r.round_trip.budget < 0.05, "budget below 0.05");
}

void comparative_statics(Outcome& out) {
  const auto p = fixture("theorem_signature.problem");
  auto settings = p.compare;
  settings.seed = p.seed;
  const auto r = run_comparative_statics(p.env, p.model(p.compare_model).spec, settings, p.solve);
  out.detail << " taste x2: (i)=" << r.taste_doubled.taste.holds << "/" << r.taste_doubled.taste.tested
             << " cost=" << r.taste_doubled.taste_cost_dominance << "; posterior x2: (ii)="
             << r.posterior_doubled.information.holds << "/" << r.posterior_doubled.information.tested
             << " cost=" << r.posterior_doubled.posterior_cost_dominance << "; rotated: (i)=" << r.rotated.taste.holds;
  out.require(r.taste_doubled.taste.holds && r.taste_doubled.taste.tested >= 100, "(i) after doubling taste cost");
  out.require(r.taste_doubled.taste_cost_dominance, "taste cost dominance");
  out.require(r.posterior_doubled.information.holds && r.posterior_doubled.information.tested >= 100,
              "(ii) after doubling posterior cost");
  out.require(r.posterior_doubled.posterior_cost_dominance, "posterior cost dominance");
  out.require(!r.rotated.taste.holds && !r.rotated.taste.counterexample.empty(), "rotation counterexample to (i)");
}

void choice_witness(Outcome& out, const char* subject) {
  const auto p = fixture("value_of_info.problem");
  CommandOptions o;
  o.command = "repro";
  o.subject = subject;
  const auto start = Clock::now();
  const auto report = run_command(p, o);
  const double elapsed = seconds_since(start);
  const auto& settings = std::string(subject) == "warp" ? p.warp : p.ind;
  out.detail << " " << subject << " tried=" << report.tree["tried"].get<std::size_t>() << " (" << elapsed << " s)";
  out.require(settings.budget == 10000, "budget 1e4");
  out.require(report.passed, std::string(subject) + " witness found and revalidated");
  out.require(elapsed < 60.0, std::string(subject) + " under 1 min");
}

void critical_sets(Outcome& out) {
  SignatureSetup s;
  const Utility w = normalize_utility(std::vector<double>{-1.0, 1.0, 0.0});
  const std::vector<Utility> tastes{s.v1, s.v2, w};
  Rng rng(88);
  double worst = 0.0;
  for (std::size_t m = 1; m <= 3; ++m) {
    for (int i = 0; i < 100; ++i) {
      const Menu a = rng.constant_menu(2, 3, 8);
      std::vector<Utility> support(tastes.begin(), tastes.begin() + static_cast<std::ptrdiff_t>(m));
      const TasteDistribution lambda(support, rng.simplex(m));
      const auto model = ModelSpec::uncertain_bias(lambda, PosteriorCostSpec::full_constraint());
      const Menu critical = critical_set(a, lambda, s.u, s.prior);
      out.require(critical.size() <= m, "|A*| <= m");
      const double target = menu_value(s.env, model, critical);
      for (int b = 0; b < 20; ++b) {
        std::vector<Act> acts = critical.acts();
        for (const auto& act : a.acts()) {
          if (!critical.contains(act) && rng.uniform() < 0.5) acts.push_back(act);
        }
        worst = std::max(worst, std::abs(menu_value(s.env, model, Menu(std::move(acts))) - target));
      }
    }
  }
  out.detail << " 300 menus x 20 intermediate, max |U(B) - U(A*)| = " << format_number(worst);
  out.require(worst <= 1e-9, "intermediate menus match within 1e-9");
}

void property_suite(Outcome& out) {
  const std::vector<std::pair<const char*, PropertyResult>> results{
      {"linearity", check_phi_linearity(101, 200)},
      {"singleton", check_singleton_neutrality(102, 200)},
      {"reduction", check_reduction_invariance(103, 200)},
      {"refinement", check_grid_refinement(104, 200)},
      {"plausibility", check_bayes_plausibility(105, 200)},
  };
  for (const auto& [name, r] : results) {
    out.detail << " " << name << "=" << (r.cases - r.failures) << "/" << r.cases << " worst "
               << format_number(r.worst) << ";";
    out.require(r.cases == 200 && r.ok(), name);
  }
}

}  // namespace

int main() {
  run(1, "value-of-info reproduction", 1.0, value_of_info);
  run(2, "envelope LP matches two-point brute force", 30.0, concavification);
  run(3, "model nesting identities", 30.0, nesting);
  run(4, "axiom signature of the four models", 300.0, axiom_signature);
  run(5, "cost elicitation and round trip", 180.0, elicitation);
  run(6, "comparative statics", 120.0, comparative_statics);
  run(7, "WARP and IND witnesses", 120.0, [](Outcome& o) {
    choice_witness(o, "warp");
    choice_witness(o, "ind");
  });
  run(8, "critical sets", 60.0, critical_sets);
  run(9, "property suite", 300.0, property_suite);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
