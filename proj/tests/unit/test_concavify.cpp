#include <cmath>

#include "doctest.h"
#include "persuasion/concavify.hpp"
#include "worked_example.hpp"

using namespace persuasion;
using persuasion::testing::kRootHalf;
using persuasion::testing::WorkedExample;

TEST_CASE("grid layout") {
  const Belief prior({0.5, 0.5});
  const PosteriorGrid g2(2, 2, prior);
  CHECK(g2.size() == 3);
  CHECK(g2.prior_index() == 1);
  const PosteriorGrid g3(3, 4, Belief({0.3, 0.3, 0.4}));
  CHECK(g3.lattice_size() == 15);
  CHECK(g3.size() == 16);
  CHECK(g3.contains(Belief::degenerate(3, 2)));
  const auto extra = g2.with_extras({Belief({0.25, 0.75}), Belief({0.25, 0.75})});
  CHECK(extra.size() == 4);
  CHECK(g2.refined().size() == 5);
  CHECK(default_grid_resolution(2) == 100);
  CHECK(default_grid_resolution(3) == 40);
  CHECK(default_grid_resolution(4) == 12);
}

TEST_CASE("worked example profile and envelope") {
  WorkedExample ex;
  const PosteriorGrid grid(2, 2, ex.prior);
  const auto profile = value_profile([&](const Belief& q) { return strotz_value(ex.menu, ex.u, ex.v, q); }, grid);
  // Lattice order runs p(s1) = 0, 1/2, 1.
  CHECK(profile.values[0] == doctest::Approx(kRootHalf));
  CHECK(profile.values[1] == doctest::Approx(kRootHalf));
  CHECK(profile.values[2] == doctest::Approx(-kRootHalf));
  const auto fine = value_profile([&](const Belief& q) { return strotz_value(ex.menu, ex.u, ex.v, q); },
                                  PosteriorGrid(2, 100, ex.prior));
  const auto env = concave_envelope_at(fine, ex.prior);
  CHECK(env.value == doctest::Approx(kRootHalf).epsilon(1e-12));
  CHECK(env.tau_star.is_bayes_plausible(ex.prior));
}

TEST_CASE("constant profile needs no information") {
  const Belief prior({0.3, 0.7});
  const auto profile = value_profile([](const Belief&) { return 0.25; }, PosteriorGrid(2, 10, prior));
  const auto env = concave_envelope_at(profile, prior);
  CHECK(env.value == doctest::Approx(0.25));
  CHECK(env.tau_star.size() == 1);
}

TEST_CASE("convex profile is split to the vertices") {
  const Belief prior({0.4, 0.6});
  const auto profile = value_profile([](const Belief& q) { return q[0] * q[0]; }, PosteriorGrid(2, 10, prior));
  const auto env = concave_envelope_at(profile, prior);
  CHECK(env.value == doctest::Approx(0.4));
  CHECK(env.tau_star.size() == 2);
}

TEST_CASE("envelope requires the prior on the grid") {
  const Belief prior({0.5, 0.5});
  const auto profile = value_profile([](const Belief&) { return 0.0; }, PosteriorGrid(2, 4, prior));
  try {
    concave_envelope_at(profile, Belief({0.3, 0.7}));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kGridMissingPrior);
  }
}

TEST_CASE("signal structure helpers") {
  const Belief prior({0.3, 0.7});
  const auto full = full_information(prior);
  CHECK(full.size() == 2);
  CHECK(full.is_bayes_plausible(prior));
  const SignalStructure dup({prior, prior, Belief::degenerate(2, 0)}, {0.5, 0.5, 0.0});
  CHECK(dup.pruned().size() == 1);
  CHECK_THROWS_AS(SignalStructure({prior}, {0.9}), Error);
}

TEST_CASE("indifference points of the worked example") {
  WorkedExample ex;
  const auto pts = indifference_points(ex.menu, {ex.v});
  REQUIRE(pts.size() == 1);
  CHECK(pts[0][0] == doctest::Approx(0.5));
  CHECK(indifference_points(Menu::singleton(ex.f), {ex.v}).empty());
}
