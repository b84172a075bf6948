#include <cmath>

#include "doctest.h"
#include "persuasion/error.hpp"
#include "persuasion/lp.hpp"

using namespace persuasion;

TEST_CASE("lp solves small programs") {
  lp::Problem p{2, {1.0, 1.0}, {{1.0, 1.0}}, {1.0}};
  const auto r = lp::solve(p);
  CHECK(r.optimum == doctest::Approx(1.0));
  CHECK(r.slackness_residual < 1e-8);

  lp::Problem single{1, {3.5}, {{1.0}}, {1.0}};
  CHECK(lp::solve(single).optimum == doctest::Approx(3.5));

  lp::Problem pick{3, {1.0, 2.0, 0.5}, {{1.0, 1.0, 1.0}}, {1.0}};
  const auto best = lp::solve(pick);
  CHECK(best.optimum == doctest::Approx(2.0));
  CHECK(best.solution[1] == doctest::Approx(1.0));
}

TEST_CASE("lp reports infeasible and unbounded programs") {
  lp::Problem infeasible{1, {1.0}, {{1.0}, {1.0}}, {1.0, 2.0}};
  CHECK_THROWS_AS(lp::solve(infeasible), Error);
  CHECK_FALSE(lp::feasible(infeasible));
  lp::Problem unbounded{2, {1.0, 0.0}, {{1.0, -1.0}}, {0.0}};
  try {
    lp::solve(unbounded);
    FAIL("expected unbounded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUnbounded);
  }
}

TEST_CASE("lp handles redundant and negative right-hand sides") {
  // Second row duplicates the first; third row has a negative rhs.
  lp::Problem p{3, {1.0, -1.0, 2.0},
                {{1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}, {-1.0, 0.0, -1.0}},
                {1.0, 2.0, -0.5}};
  const auto r = lp::solve(p);
  CHECK(r.optimum == doctest::Approx(0.5));
  CHECK(r.primal_residual < 1e-9);
}

TEST_CASE("lp survives degenerate cycling-prone programs") {
  // Beale's example in equality form with slacks.
  lp::Problem p;
  p.num_vars = 7;
  p.objective = {0.75, -150.0, 0.02, -6.0, 0.0, 0.0, 0.0};
  p.rows = {{0.25, -60.0, -0.04, 9.0, 1.0, 0.0, 0.0},
            {0.5, -90.0, -0.02, 3.0, 0.0, 1.0, 0.0},
            {0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0}};
  p.rhs = {0.0, 0.0, 1.0};
  const auto r = lp::solve(p);
  CHECK(r.optimum == doctest::Approx(0.05));
}
