#include <cmath>

#include "doctest.h"
#include "persuasion/elicitation.hpp"
#include "worked_example.hpp"

using namespace persuasion;
using persuasion::testing::WorkedExample;

namespace {

struct Sequential {
  WorkedExample ex;
  Utility v1 = normalize_utility(std::vector<double>{1.0, 0.0, -1.0});
  Utility v2 = normalize_utility(std::vector<double>{0.0, -1.0, 1.0});
  std::vector<Utility> grid{ex.u, v1, v2};
  TasteDistribution reference{grid, {0.4, 0.3, 0.3}};
  PosteriorCostSpec posterior = PosteriorCostSpec::separable(Psi::kEntropy, 0.1, 2);
  TasteCostSpec taste = TasteCostSpec::divergence(grid, reference, 0.1);
  ModelSpec model = ModelSpec::sequential(posterior, taste);
};

SignalStructure two_point(double a, double b) {
  // Posteriors (a, 1-a) and (b, 1-b) averaging to (0.5, 0.5).
  const double w = (0.5 - b) / (a - b);
  return SignalStructure({Belief({a, 1 - a}), Belief({b, 1 - b})}, {w, 1 - w});
}

}  // namespace

TEST_CASE("posterior estimates are lower bounds and grounded") {
  Sequential s;
  FamilyConfig config;
  config.count = 60;
  const auto family = random_family(4, 2, 3, config, s.ex.prior);
  const Elicitor elicitor(s.ex.env, s.model, family);
  const auto none = elicitor.posterior_cost(SignalStructure::uninformative(s.ex.prior));
  CHECK(std::abs(none.value) < 1e-9);
  for (const auto& tau : {two_point(0.8, 0.3), two_point(0.95, 0.1), full_information(s.ex.prior)}) {
    const double truth = posterior_cost(s.posterior, tau, s.ex.prior);
    CHECK(elicitor.posterior_cost(tau).value <= truth + 1e-9);
  }
}

TEST_CASE("a supporting menu nearly attains the posterior cost") {
  Sequential s;
  const auto tau = two_point(0.8, 0.3);
  const auto direction = common_direction(s.ex.u, s.grid);
  REQUIRE(direction);
  const auto menu = supporting_menu(s.ex.env, tau, Psi::kEntropy, 0.1, *direction, 0.95);
  REQUIRE(menu);
  MenuFamily family;
  family.add(*menu, "supporting");
  SolveOptions options;
  options.extras = signal_extras({tau}, s.ex.prior);
  const Elicitor elicitor(s.ex.env, s.model, family, options);
  const double truth = posterior_cost(s.posterior, tau, s.ex.prior);
  const double estimate = elicitor.posterior_cost(tau).value;
  CHECK(estimate <= truth + 1e-9);
  CHECK(estimate >= 0.9 * truth);
}

TEST_CASE("taste estimates use constant menus and stay below the true cost") {
  Sequential s;
  FamilyConfig config;
  config.count = 80;
  config.constant = true;
  const auto family = random_family(9, 2, 3, config, s.ex.prior);
  const Elicitor elicitor(s.ex.env, s.model, family);
  CHECK(std::abs(elicitor.taste_cost(s.reference).value) < 1e-9);
  const TasteDistribution lambda(s.grid, {0.8, 0.1, 0.1});
  const auto est = elicitor.taste_cost(lambda);
  CHECK(est.value <= taste_cost(s.taste, lambda) + 1e-9);
  CHECK(est.value >= 0.0);
}

TEST_CASE("conflict menu separates a shifted taste distribution") {
  Sequential s;
  const TasteDistribution lambda(s.grid, {0.7, 0.2, 0.1});
  const auto menu = conflict_menu(s.ex.env, lambda, s.reference, 0.1, 0.95);
  REQUIRE(menu);
  CHECK(menu->is_constant());
  MenuFamily family;
  family.add(*menu, "conflict");
  const Elicitor elicitor(s.ex.env, s.model, family);
  const double truth = taste_cost(s.taste, lambda);
  const double estimate = elicitor.taste_cost(lambda).value;
  CHECK(estimate <= truth + 1e-9);
  CHECK(estimate >= 0.5 * truth);
}

TEST_CASE("constant equivalent lies on the commitment indifference curve") {
  WorkedExample ex;
  const auto model = ModelSpec::known_bias(ex.v, PosteriorCostSpec::full_constraint());
  const auto ce = constant_equivalent(ex.env, model, ex.menu);
  const Act constant = Act::constant(ce.witness, 2);
  CHECK(expected_utility(ex.u, constant, ex.prior) == doctest::Approx(ce.value).epsilon(1e-10));
}

TEST_CASE("round-trip lattices") {
  Sequential s;
  for (const auto& tau : two_point_structures(s.ex.prior, 10)) CHECK(tau.is_bayes_plausible(s.ex.prior));
  const auto lattice = taste_lattice(s.grid, 4);
  // Compositions of 4 into 3 parts.
  CHECK(lattice.size() == 15);
}
