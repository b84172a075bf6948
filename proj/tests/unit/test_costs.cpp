#include <cmath>

#include "doctest.h"
#include "persuasion/costs.hpp"
#include "persuasion/random.hpp"
#include "worked_example.hpp"

using namespace persuasion;
using persuasion::testing::kRootHalf;
using persuasion::testing::WorkedExample;

TEST_CASE("posterior costs") {
  const Belief prior({0.5, 0.5});
  const auto entropy = PosteriorCostSpec::separable(Psi::kEntropy, 1.0, 2);
  CHECK(posterior_cost(entropy, SignalStructure::uninformative(prior), prior) == 0.0);
  CHECK(posterior_cost(entropy, full_information(prior), prior) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  const auto quad = PosteriorCostSpec::separable(Psi::kQuadratic, 2.0, 2);
  CHECK(posterior_cost(quad, full_information(prior), prior) == doctest::Approx(1.0));

  const auto only_prior = PosteriorCostSpec::finite_constraint({SignalStructure::uninformative(prior)});
  CHECK(std::isinf(posterior_cost(only_prior, full_information(prior), prior)));
  CHECK(posterior_cost(only_prior, SignalStructure::uninformative(prior), prior) == 0.0);
  CHECK(posterior_cost(PosteriorCostSpec::full_constraint(), full_information(prior), prior) == 0.0);

  const SignalStructure off({Belief({0.9, 0.1})}, {1.0});
  CHECK_THROWS_AS(posterior_cost(entropy, off, prior), Error);
  CHECK_THROWS_AS(PosteriorCostSpec::separable(Psi::kEntropy, -1.0, 2), Error);
}

TEST_CASE("constraint hull membership") {
  const Belief prior({0.5, 0.5});
  const auto a = SignalStructure::uninformative(prior);
  const auto b = full_information(prior);
  const SignalStructure half({prior, Belief::degenerate(2, 0), Belief::degenerate(2, 1)}, {0.5, 0.25, 0.25});
  CHECK(in_signal_hull(half, {a, b}));
  const SignalStructure other({Belief({0.25, 0.75}), Belief({0.75, 0.25})}, {0.5, 0.5});
  CHECK_FALSE(in_signal_hull(other, {a, b}));
}

TEST_CASE("taste costs") {
  WorkedExample ex;
  const std::vector<Utility> grid{ex.u, ex.v};
  const TasteDistribution uniform({ex.u, ex.v}, {0.5, 0.5});
  const auto div = TasteCostSpec::divergence(grid, uniform, 1.0);
  CHECK(taste_cost(div, uniform) == 0.0);
  CHECK(taste_cost(div, TasteDistribution::degenerate(ex.u)) == doctest::Approx(std::log(2.0)));
  const auto fixed = TasteCostSpec::fixed(grid, uniform);
  CHECK(std::isinf(taste_cost(fixed, TasteDistribution::degenerate(ex.u))));
  CHECK(taste_cost(fixed, uniform) == 0.0);
  const auto lin = TasteCostSpec::linear(grid, TasteDistribution::degenerate(ex.v), {0.3, 0.0});
  CHECK(taste_cost(lin, uniform) == doctest::Approx(0.15));
  CHECK_THROWS_AS(TasteCostSpec::linear(grid, TasteDistribution::degenerate(ex.v), {0.3, 0.1}), Error);
  const auto narrow = TasteCostSpec::divergence({ex.v}, TasteDistribution::degenerate(ex.v), 1.0);
  CHECK_THROWS_AS(taste_cost(narrow, uniform), Error);
  const auto off = TasteCostSpec::divergence(grid, TasteDistribution::degenerate(ex.v), 1.0);
  CHECK(std::isinf(taste_cost(off, uniform)));
}

TEST_CASE("inner taste stage") {
  WorkedExample ex;
  const std::vector<Utility> grid{ex.u, ex.v};
  const Belief left = Belief::degenerate(2, 0);
  const auto fixed = TasteCostSpec::fixed(grid, TasteDistribution({ex.u, ex.v}, {0.5, 0.5}));
  const auto fs = inner_taste_stage(ex.menu, ex.u, left, fixed);
  CHECK(fs.value == doctest::Approx(0.0));

  const auto off = TasteCostSpec::divergence(grid, TasteDistribution::degenerate(ex.v), 0.25);
  const auto os = inner_taste_stage(ex.menu, ex.u, left, off);
  CHECK(os.value == doctest::Approx(-kRootHalf));
  CHECK(os.lambda_star.weight_of(ex.v) == doctest::Approx(1.0));

  const TasteDistribution uniform({ex.u, ex.v}, {0.5, 0.5});
  const auto stiff = TasteCostSpec::divergence(grid, uniform, 1e6);
  const auto ss = inner_taste_stage(ex.menu, ex.u, left, stiff);
  CHECK(std::abs(ss.value - random_strotz_value(ex.menu, ex.u, uniform, left)) < 1e-4);
  CHECK(std::abs(ss.lambda_star.weight_of(ex.u) - 0.5) < 1e-4);

  const auto soft = TasteCostSpec::divergence(grid, uniform, 0.5);
  const auto sv = inner_taste_stage(ex.menu, ex.u, left, soft);
  const double closed = 0.5 * std::log(0.5 * std::exp(kRootHalf / 0.5) + 0.5 * std::exp(-kRootHalf / 0.5));
  CHECK(sv.value == doctest::Approx(closed).epsilon(1e-12));
  CHECK(sv.value >= random_strotz_value(ex.menu, ex.u, uniform, left));

  const auto lin = TasteCostSpec::linear(grid, TasteDistribution::degenerate(ex.v), {0.5, 0.0});
  const auto ls = inner_taste_stage(ex.menu, ex.u, left, lin);
  CHECK(ls.value == doctest::Approx(kRootHalf - 0.5));
  CHECK(ls.lambda_star.weight_of(ex.u) == doctest::Approx(1.0));
}

TEST_CASE("joint costs") {
  WorkedExample ex;
  const std::vector<Utility> grid{ex.u, ex.v};
  const TasteDistribution uniform({ex.u, ex.v}, {0.5, 0.5});
  const JointCostSpec spec{PosteriorCostSpec::separable(Psi::kEntropy, 1.0, 2),
                           TasteCostSpec::divergence(grid, uniform, 1.0)};
  const JointDistribution grounded({{ex.prior, ex.u, 0.5}, {ex.prior, ex.v, 0.5}});
  CHECK(joint_cost(spec, grounded, ex.prior) == 0.0);
  const JointDistribution managed({{ex.prior, ex.u, 1.0}});
  CHECK(joint_cost(spec, managed, ex.prior) == doctest::Approx(std::log(2.0)));
  const JointDistribution informed({{Belief::degenerate(2, 0), ex.u, 0.25},
                                    {Belief::degenerate(2, 0), ex.v, 0.25},
                                    {Belief::degenerate(2, 1), ex.u, 0.25},
                                    {Belief::degenerate(2, 1), ex.v, 0.25}});
  CHECK(joint_cost(spec, informed, ex.prior) == doctest::Approx(std::log(2.0)));

  const DivergenceJointSpec kl{1.0, grounded};
  CHECK(divergence_joint_cost(kl, grounded) == 0.0);
  CHECK(divergence_joint_cost(kl, managed) == doctest::Approx(std::log(2.0)));
  CHECK(std::isinf(divergence_joint_cost(kl, informed)));
}

TEST_CASE("posterior cost is Blackwell monotone and convex") {
  Rng rng(11);
  const Belief prior({0.35, 0.65});
  const auto spec = PosteriorCostSpec::separable(Psi::kEntropy, 0.7, 2);
  for (int i = 0; i < 100; ++i) {
    // Two-point structure through the prior, then split one atom further.
    const double lo = rng.uniform(0.0, prior[0]);
    const double hi = rng.uniform(prior[0], 1.0);
    const double w = (hi - prior[0]) / (hi - lo);
    const SignalStructure tau({Belief({lo, 1 - lo}), Belief({hi, 1 - hi})}, {w, 1 - w});
    const double a = rng.uniform(0.0, lo);
    const double beta = (hi > lo) ? rng.uniform() : 0.5;
    const double b = (lo - beta * a) / (1 - beta);
    if (b > 1.0) continue;
    const SignalStructure spread({Belief({a, 1 - a}), Belief({b, 1 - b}), Belief({hi, 1 - hi})},
                                 {w * beta, w * (1 - beta), 1 - w});
    CHECK(posterior_cost(spec, spread, prior) >= posterior_cost(spec, tau, prior) - 1e-12);
  }
}
