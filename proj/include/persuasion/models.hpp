#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/concavify.hpp"
#include "persuasion/costs.hpp"
#include "persuasion/domain.hpp"
#include "persuasion/strotz.hpp"

namespace persuasion {

/// Shared primitives of every model: commitment ranking (u, p0) and the
/// selection tie tolerance.
struct Environment {
  Belief prior;
  Utility principal;
  double tie_tol{kDefaultTieTol};
};

/// A menu-value model. Every kind except divergence delegation reduces to a
/// posterior cost and a taste-stage cost; `stage` records which benefit
/// function the kind evaluates at each posterior.
struct ModelSpec {
  enum class Kind {
    kKnownBias,
    kUncertainBias,
    kCostly,
    kSequential,
    kDelegation,
    kFixedInfo,
    kNoInfo,
    kCostlyKnownBias,
    kCostlyNoBias,
  };
  enum class Stage { kStrotz, kRandomStrotz, kInner };

  Kind kind{Kind::kKnownBias};
  Stage stage{Stage::kStrotz};
  PosteriorCostSpec posterior = PosteriorCostSpec::full_constraint();
  std::optional<TasteCostSpec> taste;  // absent only for divergence delegation
  std::optional<DivergenceJointSpec> joint;

  static ModelSpec known_bias(const Utility& v, PosteriorCostSpec gamma);
  static ModelSpec uncertain_bias(const TasteDistribution& lambda, PosteriorCostSpec gamma);
  static ModelSpec costly(PosteriorCostSpec cost, const TasteDistribution& lambda);
  static ModelSpec sequential(PosteriorCostSpec cost, TasteCostSpec taste_cost);
  static ModelSpec fixed_info(const SignalStructure& tau, TasteCostSpec taste_cost);
  static ModelSpec no_info(const Belief& prior, TasteCostSpec taste_cost);
  static ModelSpec costly_known_bias(PosteriorCostSpec cost, const Utility& v);
  static ModelSpec costly_no_bias(PosteriorCostSpec cost, const Utility& principal);
  /// Delegation with a separable joint cost (solved through the sequential program).
  static ModelSpec delegation(JointCostSpec cost);
  /// Delegation with kappa * KL(pi || reference) over unconstrained joint distributions.
  static ModelSpec delegation(DivergenceJointSpec cost);

  const TasteCostSpec& taste_cost() const;
  bool is_divergence_delegation() const noexcept { return joint.has_value(); }
  /// Taste points whose selections can matter (support of the fixed reference,
  /// or the full taste grid for managed kinds).
  std::vector<Utility> relevant_tastes() const;
  std::string kind_name() const;
};

std::string_view to_string(ModelSpec::Kind kind);

struct SolveOptions {
  std::size_t resolution{0};      // 0 selects default_grid_resolution(k)
  std::vector<Belief> extras;     // additional grid posteriors
  bool kink_enrichment{true};     // add agent-indifference points (k = 2)
  bool refinement_check{false};   // also solve at 2G and report the delta
};

struct Diagnostics {
  std::size_t resolution{0};
  std::size_t grid_points{0};
  double lp_residual{0.0};
  double tie_diameter{0.0};
  double refinement_delta{0.0};
  bool refinement_checked{false};
  std::size_t iterations{0};
  std::string feasibility;  // "bayes-plausible" or "unconstrained"
};

struct Solution {
  double value{0.0};
  SignalStructure tau_star;
  std::vector<TasteDistribution> lambda_star;  // aligned with tau_star posteriors
  std::optional<JointDistribution> pi_star;
  Diagnostics diagnostics;
};

/// Benefit at one posterior used by the model's outer information program.
double stage_value(const Environment& env, const ModelSpec& model, const Menu& menu, const Belief& belief);

Solution solve_model(const Environment& env, const ModelSpec& model, const Menu& menu,
                     const SolveOptions& options = {});

/// Shorthand for solve_model(...).value.
double menu_value(const Environment& env, const ModelSpec& model, const Menu& menu,
                  const SolveOptions& options = {});

struct DelegationOptions {
  double residual{1e-8};
  std::size_t max_iterations{100000};
};

Solution solve_delegation(const Environment& env, const ModelSpec& model, const Menu& menu,
                          const SolveOptions& options = {}, const DelegationOptions& delegation = {});

/// Probability of each act of `menu` being chosen ex post, given the solved
/// optimizers (optimistic tie-breaking at each posterior and taste).
std::vector<double> within_menu_choice(const Environment& env, const Solution& solution, const Menu& menu);

}  // namespace persuasion
