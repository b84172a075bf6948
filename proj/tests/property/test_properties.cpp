#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "persuasion/costs.hpp"
#include "properties.hpp"

using namespace persuasion;
using namespace persuasion::testing;

namespace {

constexpr std::size_t kCases = 200;

void report(const char* name, const PropertyResult& r) {
  INFO(name << ": " << r.failures << " of " << r.cases << " failed, worst " << r.worst);
  CHECK(r.cases == kCases);
  CHECK(r.ok());
}

}  // namespace

TEST_CASE("phi is linear in menu mixtures") { report("linearity", check_phi_linearity(101, kCases)); }

TEST_CASE("singleton menus are valued at commitment utility") {
  report("singleton", check_singleton_neutrality(102, kCases));
}

TEST_CASE("values ignore non-extreme acts") { report("reduction", check_reduction_invariance(103, kCases)); }

TEST_CASE("grid refinement never lowers the value") { report("refinement", check_grid_refinement(104, kCases)); }

TEST_CASE("optimal signals are Bayes plausible") { report("plausibility", check_bayes_plausibility(105, kCases)); }

TEST_CASE("free information weakly beats the prior") {
  SignatureSetup s;
  Rng rng(106);
  const auto model = s.known_bias();
  for (std::size_t i = 0; i < kCases; ++i) {
    const Menu a = rng.menu(2, 3, 5);
    CHECK(menu_value(s.env, model, a) >= stage_value(s.env, model, a, s.prior) - 1e-12);
  }
}

TEST_CASE("posterior costs are nonnegative and vanish without information") {
  SignatureSetup s;
  Rng rng(107);
  CHECK(posterior_cost(s.entropy, SignalStructure::uninformative(s.prior), s.prior) == doctest::Approx(0.0));
  for (std::size_t i = 0; i < kCases; ++i) {
    const double a = rng.uniform(0.5, 1.0);
    const double b = rng.uniform(0.0, 0.5);
    const double w = (0.5 - b) / (a - b);
    const SignalStructure tau({Belief({a, 1 - a}), Belief({b, 1 - b})}, {w, 1 - w});
    CHECK(posterior_cost(s.entropy, tau, s.prior) >= -1e-15);
  }
}
