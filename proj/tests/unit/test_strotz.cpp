#include "doctest.h"
#include "persuasion/random.hpp"
#include "persuasion/strotz.hpp"
#include "worked_example.hpp"

using namespace persuasion;
using persuasion::testing::kRootHalf;
using persuasion::testing::WorkedExample;

TEST_CASE("agent argmax and optimistic tie-breaking") {
  WorkedExample ex;
  const auto tie = agent_argmax(ex.menu, ex.v, ex.prior);
  CHECK(tie.acts.size() == 2);
  const auto strict = agent_argmax(ex.menu, ex.v, Belief::degenerate(2, 0));
  REQUIRE(strict.acts.size() == 1);
  CHECK(ex.menu[strict.acts[0]].approx_equal(ex.g));
  CHECK(agent_argmax(Menu::singleton(ex.f), ex.v, ex.prior).acts.size() == 1);

  CHECK(strotz_value(ex.menu, ex.u, ex.v, ex.prior) == doctest::Approx(kRootHalf));
  CHECK(strotz_value(ex.menu, ex.u, ex.v, Belief::degenerate(2, 0)) == doctest::Approx(-kRootHalf));
  CHECK(strotz_value(ex.menu, ex.u, ex.u, Belief::degenerate(2, 0)) == doctest::Approx(kRootHalf));
}

TEST_CASE("random Strotz and joint benefits") {
  WorkedExample ex;
  const TasteDistribution mix({ex.u, ex.v}, {0.5, 0.5});
  CHECK(random_strotz_value(ex.menu, ex.u, mix, Belief::degenerate(2, 0)) == doctest::Approx(0.0));
  CHECK(random_strotz_value(ex.menu, ex.u, TasteDistribution::degenerate(ex.v), ex.prior) ==
        doctest::Approx(strotz_value(ex.menu, ex.u, ex.v, ex.prior)));
  CHECK(random_strotz_value(Menu::singleton(ex.g), ex.u, mix, ex.prior) == doctest::Approx(-0.5 * kRootHalf));

  const JointDistribution full({{Belief::degenerate(2, 0), ex.v, 0.5}, {Belief::degenerate(2, 1), ex.v, 0.5}});
  CHECK(joint_benefit(ex.menu, ex.u, full) == doctest::Approx(0.0));
  CHECK(full.is_bayes_plausible(ex.prior));
  const JointDistribution point({{ex.prior, ex.v, 1.0}});
  CHECK(joint_benefit(ex.menu, ex.u, point) == doctest::Approx(kRootHalf));
}

TEST_CASE("taste distribution invariants") {
  WorkedExample ex;
  CHECK_THROWS_AS(TasteDistribution({ex.u, ex.u}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(TasteDistribution({ex.u, ex.v}, {0.5, 0.4}), Error);
  const TasteDistribution lam({ex.u, ex.v}, {0.25, 0.75});
  CHECK(lam.weight_of(ex.v) == doctest::Approx(0.75));
  CHECK_THROWS_AS(lam.weights_on({ex.u}), Error);
}

TEST_CASE("joint slices recover marginals and conditionals") {
  WorkedExample ex;
  const Belief q({0.2, 0.8});
  const JointDistribution pi({{q, ex.u, 0.1}, {q, ex.v, 0.3}, {ex.prior, ex.v, 0.6}});
  const auto slices = pi.slices();
  REQUIRE(slices.size() == 2);
  CHECK(slices[0].weight == doctest::Approx(0.4));
  CHECK(slices[0].conditional.weight_of(ex.v) == doctest::Approx(0.75));
}

TEST_CASE("evaluator agrees with the direct formula") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const auto menu = rng.menu(3, 4, 6);
    const auto u = rng.utility(4);
    const auto v = rng.utility(4);
    const auto p = rng.belief(3);
    const StrotzEvaluator eval(menu, u);
    CHECK(eval.value(v, p) == doctest::Approx(strotz_value(menu, u, v, p)).epsilon(1e-12));
    double best = -1e9;
    for (const auto& f : menu.acts()) best = std::max(best, expected_utility(u, f, p));
    CHECK(strotz_value(menu, u, v, p) <= best + 1e-12);
    CHECK(strotz_value(menu, u, u, p) == doctest::Approx(best));
  }
}
