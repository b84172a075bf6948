#pragma once

// Randomized structural checks shared by the property suite and the
// acceptance binary. Each returns the number of cases run, how many failed
// and the worst discrepancy seen.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "persuasion/models.hpp"
#include "persuasion/random.hpp"

namespace persuasion::testing {

struct PropertyResult {
  std::size_t cases{0};
  std::size_t failures{0};
  double worst{0.0};

  void record(double discrepancy, double tol) {
    ++cases;
    worst = std::max(worst, discrepancy);
    if (!(discrepancy <= tol)) ++failures;
  }
  bool ok() const { return cases > 0 && failures == 0; }
};

struct NamedSpec {
  std::string name;
  ModelSpec spec;
};

/// Two states, outcomes (x, y, z); the four signature models plus the
/// no-information and unbiased costly variants.
struct SignatureSetup {
  Utility u = normalize_utility(std::vector<double>{1.0, -1.0, 0.0});
  Utility v1 = normalize_utility(std::vector<double>{1.0, 0.0, -1.0});
  Utility v2 = normalize_utility(std::vector<double>{0.0, -1.0, 1.0});
  Belief prior{{0.5, 0.5}};
  Environment env{prior, u};
  std::vector<Utility> grid{u, v1, v2};
  TasteDistribution half{{v1, v2}, {0.5, 0.5}};
  TasteDistribution reference{grid, {0.4, 0.3, 0.3}};
  PosteriorCostSpec entropy = PosteriorCostSpec::separable(Psi::kEntropy, 0.1, 2);
  TasteCostSpec divergence = TasteCostSpec::divergence(grid, reference, 0.1);

  ModelSpec known_bias() const { return ModelSpec::known_bias(v1, PosteriorCostSpec::full_constraint()); }
  ModelSpec uncertain_bias() const { return ModelSpec::uncertain_bias(half, PosteriorCostSpec::full_constraint()); }
  ModelSpec costly() const { return ModelSpec::costly(entropy, half); }
  ModelSpec sequential() const { return ModelSpec::sequential(entropy, divergence); }

  std::vector<NamedSpec> models() const {
    return {{"known-bias", known_bias()},
            {"uncertain-bias", uncertain_bias()},
            {"costly", costly()},
            {"sequential", sequential()},
            {"no-info", ModelSpec::no_info(prior, divergence)},
            {"costly-no-bias", ModelSpec::costly_no_bias(entropy, u)}};
  }
};

/// phi of a mixture of menus is the mixture of the phis.
inline PropertyResult check_phi_linearity(std::uint64_t seed, std::size_t cases, double tol = 1e-12) {
  SignatureSetup s;
  Rng rng(seed);
  PropertyResult r;
  for (std::size_t i = 0; i < cases; ++i) {
    const Menu a = rng.menu(2, 3, 4);
    const Menu b = rng.menu(2, 3, 4);
    const double alpha = rng.uniform(0.05, 0.95);
    const Belief p = rng.belief(2);
    const Utility v = rng.utility(3);
    const double mixed = strotz_value(mix_menus(a, b, alpha), s.u, v, p);
    const double split = alpha * strotz_value(a, s.u, v, p) + (1.0 - alpha) * strotz_value(b, s.u, v, p);
    r.record(std::abs(mixed - split), tol);
  }
  return r;
}

/// U({f}) equals the commitment utility of f at the prior for every model.
inline PropertyResult check_singleton_neutrality(std::uint64_t seed, std::size_t cases, double tol = 1e-9) {
  SignatureSetup s;
  Rng rng(seed);
  PropertyResult r;
  const auto models = s.models();
  for (std::size_t i = 0; i < cases; ++i) {
    const Act f = rng.act(2, 3);
    const auto& m = models[i % models.size()];
    const double value = menu_value(s.env, m.spec, Menu::singleton(f));
    r.record(std::abs(value - expected_utility(s.u, f, s.prior)), tol);
  }
  return r;
}

/// U is unchanged by dropping non-extreme acts or adding interior mixtures.
inline PropertyResult check_reduction_invariance(std::uint64_t seed, std::size_t cases, double tol = 1e-9) {
  SignatureSetup s;
  Rng rng(seed);
  PropertyResult r;
  const auto models = s.models();
  for (std::size_t i = 0; i < cases; ++i) {
    const Menu a = rng.menu(2, 3, 4);
    const auto& m = models[i % models.size()];
    std::vector<Act> acts = a.acts();
    for (std::size_t j = 0; j + 1 < a.size(); ++j) acts.push_back(a[j].mix(a[j + 1], rng.uniform(0.1, 0.9)));
    const double base = menu_value(s.env, m.spec, a);
    const double reduced = menu_value(s.env, m.spec, reduce_menu(a));
    const double enlarged = menu_value(s.env, m.spec, Menu(std::move(acts)));
    r.record(std::max(std::abs(base - reduced), std::abs(base - enlarged)), tol);
  }
  return r;
}

/// Doubling the lattice resolution never lowers the computed value.
inline PropertyResult check_grid_refinement(std::uint64_t seed, std::size_t cases, double tol = 1e-12) {
  SignatureSetup s;
  Rng rng(seed);
  PropertyResult r;
  const std::vector<ModelSpec> models{s.known_bias(), s.uncertain_bias(), s.costly(), s.sequential()};
  for (std::size_t i = 0; i < cases; ++i) {
    const Menu a = rng.menu(2, 3, 4);
    const auto& m = models[i % models.size()];
    const std::size_t g = 10 + rng.index(40);
    SolveOptions coarse;
    coarse.resolution = g;
    SolveOptions fine = coarse;
    fine.resolution = 2 * g;
    const double drop = menu_value(s.env, m, a, coarse) - menu_value(s.env, m, a, fine);
    r.record(std::max(drop, 0.0), tol);
  }
  return r;
}

/// Optimal signals average back to the prior with weights summing to one.
inline PropertyResult check_bayes_plausibility(std::uint64_t seed, std::size_t cases, double tol = 1e-9) {
  SignatureSetup s;
  Rng rng(seed);
  PropertyResult r;
  const auto models = s.models();
  for (std::size_t i = 0; i < cases; ++i) {
    const Menu a = rng.menu(2, 3, 5);
    const auto& m = models[i % models.size()];
    const auto sol = solve_model(s.env, m.spec, a);
    const auto centre = sol.tau_star.barycenter();
    double residual = 0.0;
    for (std::size_t k = 0; k < 2; ++k) residual = std::max(residual, std::abs(centre[k] - s.prior[k]));
    double total = 0.0;
    for (double w : sol.tau_star.weights()) {
      total += w;
      residual = std::max(residual, std::max(-w, 0.0));
    }
    residual = std::max(residual, std::abs(total - 1.0));
    r.record(residual, tol);
  }
  return r;
}

}  // namespace persuasion::testing
