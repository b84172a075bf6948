#include <cmath>
#include <string>

#include "doctest.h"
#include "persuasion/problem.hpp"

using namespace persuasion;

namespace {

std::string base(const std::string& prior = "[0.5, 0.5]", const std::string& principal = "[1, -1, 0]",
                 const std::string& models = R"([{"name": "kb", "kind": "known-bias", "taste": "v"}])") {
  return R"({
    // comments are allowed
    "outcomes": ["x", "y", "z"], "states": ["s1", "s2"],
    "prior": )" + prior + R"(, "principal": )" + principal + R"(,
    "tastes": [{"name": "v", "weights": [0, 1, -1]}],
    "menus": [{"name": "A", "acts": [
      {"lotteries": [[1, 0, 0], [1, 0, 0]]},
      {"lotteries": [[0, 1, 0], [0, 0, 1]]}]}],
    "models": )" + models + "}";
}

ErrorCode code_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIoError;
}

std::string message_of(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("a valid problem loads with normalized utilities") {
  const auto p = parse_problem(base());
  CHECK(p.states.size() == 2);
  CHECK(p.menus.size() == 1);
  CHECK(p.menu("A").size() == 2);
  CHECK(p.model("kb").spec.kind == ModelSpec::Kind::kKnownBias);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(p.env.principal[0] == doctest::Approx(r));
  CHECK(p.env.principal[1] == doctest::Approx(-r));
  REQUIRE(!p.notices.empty());
  CHECK(p.notices.front().find("principal normalized") == 0);
  CHECK(p.raw_principal == std::vector<double>{1, -1, 0});
}

TEST_CASE("already normalized utilities produce no notice") {
  const auto p = parse_problem(base("[0.5, 0.5]", "[0.70710678118654752, -0.70710678118654752, 0]"));
  for (const auto& n : p.notices) CHECK(n.find("principal") == std::string::npos);
}

TEST_CASE("a prior summing to 0.99 is a validation error on prior") {
  const auto text = base("[0.5, 0.49]");
  CHECK(code_of(text) == ErrorCode::kValidationError);
  CHECK(message_of(text).find("prior") != std::string::npos);
}

TEST_CASE("validation errors name the field") {
  CHECK(message_of(base("[0.5, 0.5, 0]")).find("prior") != std::string::npos);
  CHECK(message_of(base("[0.5, 0.5]", "[1, 1, 1]")).find("principal") != std::string::npos);
  const auto bad_taste = base("[0.5, 0.5]", "[1, -1, 0]", R"([{"name": "kb", "kind": "known-bias", "taste": "w"}])");
  CHECK(message_of(bad_taste).find("models[0].taste") != std::string::npos);
  const auto bad_kind = base("[0.5, 0.5]", "[1, -1, 0]", R"([{"name": "kb", "kind": "oracle"}])");
  CHECK(message_of(bad_kind).find("models[0].kind") != std::string::npos);
  const auto bad_kappa = base("[0.5, 0.5]", "[1, -1, 0]",
                              R"([{"name": "c", "kind": "costly", "lambda": {"v": 1},
                                   "posterior_cost": {"kind": "separable", "psi": "entropy", "kappa": -1}}])");
  CHECK(message_of(bad_kappa).find("models[0].posterior_cost.kappa") != std::string::npos);
  const auto missing = R"({"outcomes": ["x"], "states": ["s"]})";
  CHECK(message_of(missing).find("prior: missing field") != std::string::npos);
}

TEST_CASE("malformed text is a parse error") {
  CHECK(code_of("{\"prior\": [0.5,") == ErrorCode::kParseError);
}

TEST_CASE("signals must be Bayes plausible") {
  const auto models = R"([{"name": "fi", "kind": "fixed-info",
      "signal": {"posteriors": [[0.9, 0.1], [0.2, 0.8]], "weights": [0.5, 0.5]},
      "taste_cost": {"kind": "fixed", "reference": {"v": 1}}}])";
  CHECK(message_of(base("[0.5, 0.5]", "[1, -1, 0]", models)).find("models[0].signal") != std::string::npos);
}

TEST_CASE("every model kind parses") {
  const auto models = R"([
    {"name": "a", "kind": "known-bias", "taste": "v", "posterior_cost": {"kind": "constraint", "members": ["full-information"]}},
    {"name": "b", "kind": "uncertain-bias", "lambda": {"v": 1}},
    {"name": "c", "kind": "costly", "lambda": {"v": 1}, "posterior_cost": {"kind": "separable", "psi": "quadratic", "kappa": 1}},
    {"name": "d", "kind": "sequential", "posterior_cost": {"kind": "separable", "psi": "entropy", "kappa": 1},
     "taste_cost": {"kind": "linear", "reference": {"v": 1}, "penalty": {"v": 0}}},
    {"name": "e", "kind": "fixed-info", "signal": "full-information", "taste_cost": {"kind": "fixed", "reference": {"v": 1}}},
    {"name": "f", "kind": "no-info", "taste_cost": {"kind": "divergence", "kappa": 1, "reference": {"v": 1}}},
    {"name": "g", "kind": "costly-known-bias", "taste": "v", "posterior_cost": {"kind": "separable", "psi": "entropy", "kappa": 1}},
    {"name": "h", "kind": "costly-no-bias", "posterior_cost": {"kind": "separable", "psi": "entropy", "kappa": 1}},
    {"name": "i", "kind": "delegation", "posterior_cost": {"kind": "separable", "psi": "entropy", "kappa": 1},
     "taste_cost": {"kind": "fixed", "reference": {"v": 1}}},
    {"name": "j", "kind": "delegation", "joint": {"kappa": 1, "reference": [
       {"posterior": [0.5, 0.5], "taste": "v", "weight": 1}]}}])";
  const auto p = parse_problem(base("[0.5, 0.5]", "[1, -1, 0]", models));
  CHECK(p.models.size() == 10);
  CHECK(p.model("j").spec.is_divergence_delegation());
  CHECK_THROWS_AS(p.model("zz"), Error);
}

TEST_CASE("settings sections override defaults") {
  auto text = base();
  text.pop_back();
  text += R"(, "seed": 7, "solve": {"grid": 50, "tie_tol": 1e-8},
    "audit": {"count": 12, "axioms": ["1", "11"]},
    "repro": {"warp": {"model": "kb", "budget": 10, "threshold": 0.6}}})";
  const auto p = parse_problem(text);
  CHECK(p.seed == 7);
  CHECK(p.solve.resolution == 50);
  CHECK(p.env.tie_tol == doctest::Approx(1e-8));
  CHECK(p.audit.count == 12);
  CHECK(p.audit_axioms.size() == 2);
  CHECK(p.warp.budget == 10);
  CHECK(p.warp.rule.threshold == doctest::Approx(0.6));

  auto bad = base();
  bad.pop_back();
  bad += R"(, "audit": {"axioms": ["13"]}})";
  CHECK(message_of(bad).find("audit.axioms[0]") != std::string::npos);
}

TEST_CASE("missing files are I/O errors") {
  CHECK_THROWS_AS(load_problem("/nonexistent/none.problem"), Error);
}
