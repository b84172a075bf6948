#include <cmath>

#include "doctest.h"
#include "persuasion/models.hpp"
#include "persuasion/random.hpp"
#include "worked_example.hpp"

using namespace persuasion;
using persuasion::testing::kRootHalf;
using persuasion::testing::WorkedExample;

TEST_CASE("worked example values") {
  WorkedExample ex;
  const auto no_info = ModelSpec::no_info(ex.prior, TasteCostSpec::fixed({ex.v}, TasteDistribution::degenerate(ex.v)));
  CHECK(solve_model(ex.env, no_info, ex.menu).value == doctest::Approx(kRootHalf).epsilon(1e-14));

  const auto full_info = ModelSpec::known_bias(ex.v, PosteriorCostSpec::finite_constraint({ex.full_info()}));
  const auto fi = solve_model(ex.env, full_info, ex.menu);
  CHECK(std::abs(fi.value) < 1e-15);
  const auto choice = within_menu_choice(ex.env, fi, ex.menu);
  CHECK(choice[0] == doctest::Approx(0.5));
  CHECK(choice[1] == doctest::Approx(0.5));

  const auto full = ModelSpec::known_bias(ex.v, PosteriorCostSpec::full_constraint());
  const auto sol = solve_model(ex.env, full, ex.menu);
  CHECK(sol.value == doctest::Approx(kRootHalf).epsilon(1e-12));
  CHECK(sol.tau_star.size() == 1);
  CHECK(sol.tau_star.posteriors()[0].approx_equal(ex.prior, 1e-12));
}

TEST_CASE("prohibitive information cost matches no information") {
  Rng rng(3);
  WorkedExample ex;
  const std::vector<Utility> grid{ex.u, ex.v};
  const auto fixed = TasteCostSpec::fixed(grid, TasteDistribution({ex.u, ex.v}, {0.3, 0.7}));
  for (int i = 0; i < 10; ++i) {
    const auto menu = rng.menu(2, 3, 5);
    const auto seq = ModelSpec::sequential(PosteriorCostSpec::separable(Psi::kEntropy, 1e6, 2), fixed);
    const auto ni = ModelSpec::no_info(ex.prior, fixed);
    CHECK(std::abs(menu_value(ex.env, seq, menu) - menu_value(ex.env, ni, menu)) < 1e-4);
  }
}

TEST_CASE("singleton menus are worth their commitment value") {
  Rng rng(5);
  WorkedExample ex;
  const std::vector<Utility> grid{ex.u, ex.v};
  const TasteDistribution lam({ex.u, ex.v}, {0.4, 0.6});
  const std::vector<ModelSpec> models{
      ModelSpec::known_bias(ex.v, PosteriorCostSpec::full_constraint()),
      ModelSpec::uncertain_bias(lam, PosteriorCostSpec::full_constraint()),
      ModelSpec::costly(PosteriorCostSpec::separable(Psi::kQuadratic, 0.3, 2), lam),
      ModelSpec::sequential(PosteriorCostSpec::separable(Psi::kEntropy, 0.2, 2), TasteCostSpec::divergence(grid, lam, 0.2)),
      ModelSpec::costly_no_bias(PosteriorCostSpec::separable(Psi::kEntropy, 0.2, 2), ex.u),
  };
  for (int i = 0; i < 5; ++i) {
    const Act f = rng.act(2, 3);
    for (const auto& m : models) {
      CHECK(menu_value(ex.env, m, Menu::singleton(f)) == doctest::Approx(expected_utility(ex.u, f, ex.prior)).epsilon(1e-12));
    }
  }
}

TEST_CASE("separable delegation factorizes") {
  WorkedExample ex;
  const std::vector<Utility> grid{ex.u, ex.v};
  const TasteDistribution lam({ex.u, ex.v}, {0.5, 0.5});
  const JointCostSpec cost{PosteriorCostSpec::separable(Psi::kEntropy, 0.1, 2), TasteCostSpec::divergence(grid, lam, 0.1)};
  const auto del = solve_delegation(ex.env, ModelSpec::delegation(cost), ex.menu);
  const auto seq = solve_model(ex.env, ModelSpec::sequential(cost.posterior, cost.taste), ex.menu);
  CHECK(std::abs(del.value - seq.value) < 1e-7);
  REQUIRE(del.pi_star);
  const double recomputed = joint_benefit(ex.menu, ex.u, *del.pi_star) - joint_cost(cost, *del.pi_star, ex.prior);
  CHECK(std::abs(recomputed - del.value) < 1e-7);
}

TEST_CASE("divergence delegation matches the Gibbs value") {
  WorkedExample ex;
  const JointDistribution point({{ex.prior, ex.v, 1.0}});
  const auto sol = solve_delegation(ex.env, ModelSpec::delegation(DivergenceJointSpec{1.0, point}), ex.menu);
  CHECK(sol.value == doctest::Approx(kRootHalf).epsilon(1e-12));
  CHECK(sol.diagnostics.feasibility == "unconstrained");

  const JointDistribution wide({{Belief::degenerate(2, 0), ex.u, 0.25},
                                {Belief::degenerate(2, 0), ex.v, 0.25},
                                {Belief::degenerate(2, 1), ex.v, 0.25},
                                {ex.prior, ex.v, 0.25}});
  for (double kappa : {2.0, 0.5, 0.05}) {
    const auto s = solve_delegation(ex.env, ModelSpec::delegation(DivergenceJointSpec{kappa, wide}), ex.menu);
    double gibbs = 0.0;
    for (const auto& a : wide.atoms()) gibbs += a.weight * std::exp(strotz_value(ex.menu, ex.u, a.taste, a.belief) / kappa);
    CHECK(s.value == doctest::Approx(kappa * std::log(gibbs)).epsilon(1e-9));
  }
  const auto tiny = solve_delegation(ex.env, ModelSpec::delegation(DivergenceJointSpec{1e-3, wide}), ex.menu);
  CHECK(tiny.value == doctest::Approx(kRootHalf).epsilon(1e-2));
}

TEST_CASE("refinement diagnostics are reported") {
  WorkedExample ex;
  SolveOptions opts;
  opts.refinement_check = true;
  const auto sol = solve_model(ex.env, ModelSpec::known_bias(ex.v, PosteriorCostSpec::full_constraint()), ex.menu, opts);
  CHECK(sol.diagnostics.refinement_checked);
  CHECK(sol.diagnostics.resolution == 100);
  CHECK(std::abs(sol.diagnostics.refinement_delta) < 1e-12);
}
