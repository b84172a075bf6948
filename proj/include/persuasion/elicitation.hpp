#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/models.hpp"
#include "persuasion/random.hpp"

namespace persuasion {

/// Seeded collection of menus over which canonical costs are estimated.
struct MenuFamily {
  std::uint64_t seed{0};
  std::vector<Menu> menus;
  std::vector<std::string> strata;  // "random", "supporting", "conflict", "singleton", "projection"

  void add(Menu menu, std::string stratum);
  void append(const MenuFamily& other);
  std::size_t size() const noexcept { return menus.size(); }
  /// Members that are constant menus.
  MenuFamily constant_subfamily() const;
};

struct FamilyConfig {
  std::size_t count{500};
  std::size_t max_acts{6};
  bool constant{false};
  bool singletons{true};    // add every act of every random menu as a singleton
  bool projections{true};   // add A^{p0} of every random menu (constant families)
};

/// Random acts (or lotteries when config.constant) drawn uniformly.
MenuFamily random_family(std::uint64_t seed, std::size_t states, std::size_t outcomes, const FamilyConfig& config,
                         const Belief& prior);

/// Direction d in outcome space with u.d > 0 and v.d > 0 for every listed
/// taste, when one exists among simple candidates.
std::optional<std::vector<double>> common_direction(const Utility& principal, const std::vector<Utility>& tastes);

/// Menu whose constant-menu value profile is (scale times) the upper envelope
/// of tangents of kappa * psi at tau's posteriors. All tastes that like
/// `direction` rank its acts identically. Returns nothing when the targets
/// cannot be laid out inside the simplex.
std::optional<Menu> supporting_menu(const Environment& env, const SignalStructure& tau, Psi psi, double kappa,
                                    const std::vector<double>& direction, double scale = 0.95);

/// Constant menu in which each reference taste strictly prefers its own
/// lottery, with the principal's payoffs from those picks chosen (by
/// Frank-Wolfe over feasible layouts) to maximize the taste-cost gap at
/// lambda for a divergence cost of strength kappa / scale.
std::optional<Menu> conflict_menu(const Environment& env, const TasteDistribution& lambda,
                                  const TasteDistribution& reference, double kappa, double scale = 0.95);

/// Posteriors of the given structures plus points on the segments from each
/// posterior toward the prior, for use as grid extras.
std::vector<Belief> signal_extras(const std::vector<SignalStructure>& taus, const Belief& prior);

struct ConstantEquivalent {
  double value{0.0};
  Lottery witness;
};

/// Value of a constant menu (belief-invariant) under the model.
double constant_menu_value(const Environment& env, const ModelSpec& model, const Menu& constant_menu);

/// U(A) together with a lottery on the segment between a best and a worst
/// bracketing lottery whose commitment utility equals U(A).
ConstantEquivalent constant_equivalent(const Environment& env, const ModelSpec& model, const Menu& menu,
                                       const SolveOptions& options = {});

/// u(x_A(tau)) = sum_i w_i U(A^{q_i}).
double tau_mixture_equivalent(const Environment& env, const ModelSpec& model, const Menu& menu,
                              const SignalStructure& tau);

struct CostEstimate {
  double value{0.0};
  std::optional<std::size_t> witness;  // family index attaining the maximum
};

/// Caches U(A) for each family member and evaluates the three canonical cost
/// estimates as maxima of value gaps. Estimates are lower bounds of the
/// canonical costs.
class Elicitor {
 public:
  Elicitor(Environment env, ModelSpec model, MenuFamily family, SolveOptions options = {});

  const MenuFamily& family() const noexcept { return family_; }
  double menu_value(std::size_t index) const { return values_[index]; }

  CostEstimate posterior_cost(const SignalStructure& tau) const;
  /// Estimates for many structures at once. Values U(A^q) are cached per
  /// distinct posterior across calls.
  std::vector<double> posterior_costs(const std::vector<SignalStructure>& taus) const;
  /// Uses constant members only.
  CostEstimate taste_cost(const TasteDistribution& lambda) const;
  CostEstimate delegation_cost(const JointDistribution& pi) const;

 private:
  Environment env_;
  ModelSpec model_;
  MenuFamily family_;
  std::vector<double> values_;
  std::vector<bool> constant_;
  mutable std::vector<Belief> cached_posteriors_;
  mutable std::vector<std::vector<double>> cached_columns_;  // [posterior][member] = U(A^q)
};

double elicit_posterior_cost(const Environment& env, const ModelSpec& model, const MenuFamily& family,
                             const SignalStructure& tau, const SolveOptions& options = {});
double elicit_taste_cost(const Environment& env, const ModelSpec& model, const MenuFamily& constant_family,
                         const TasteDistribution& lambda, const SolveOptions& options = {});
double elicit_delegation_cost(const Environment& env, const ModelSpec& model, const MenuFamily& family,
                              const JointDistribution& pi, const SolveOptions& options = {});

// ---------------------------------------------------------------- Round trip

/// Two-point Bayes-plausible structures with posteriors on a two-state lattice
/// of the given resolution, plus the uninformative structure.
std::vector<SignalStructure> two_point_structures(const Belief& prior, std::size_t resolution);

/// All distributions on `support` with weights in multiples of 1/resolution.
std::vector<TasteDistribution> taste_lattice(const std::vector<Utility>& support, std::size_t resolution);

using PosteriorCostOracle = std::function<std::vector<double>(const std::vector<SignalStructure>&)>;

/// Sequential model rebuilt from elicited costs known at finitely many points;
/// extended by lower convex envelope, so the optimum is attained at a listed point.
class ElicitedSequential {
 public:
  ElicitedSequential(Environment env, std::vector<SignalStructure> structures, std::vector<double> posterior_costs,
                     std::vector<TasteDistribution> tastes, std::vector<double> taste_costs);
  /// Two-state form: for each menu the candidate signals are the two-point
  /// structures over `posteriors` plus the menu's indifference beliefs, priced
  /// by `oracle`.
  ElicitedSequential(Environment env, PosteriorCostOracle oracle, std::vector<Belief> posteriors,
                     std::vector<TasteDistribution> tastes, std::vector<double> taste_costs);

  double value(const Menu& menu) const;

 private:
  double stage(const Menu& menu, const Belief& q) const;
  void collect_support();

  Environment env_;
  std::vector<SignalStructure> structures_;
  std::vector<double> posterior_costs_;
  PosteriorCostOracle oracle_;
  std::vector<Belief> posteriors_;
  std::vector<TasteDistribution> tastes_;
  std::vector<double> taste_costs_;
  std::vector<Utility> support_;
};

// ------------------------------------------------------- Comparative statics

struct ComparisonSamples {
  std::vector<Menu> constant_menus;
  std::vector<Menu> menus;
  std::vector<SignalStructure> taus;
  std::vector<TasteDistribution> lambdas;
  std::uint64_t seed{0};
  std::size_t random_lotteries{200};
};

struct ImplicationCheck {
  std::size_t tested{0};
  std::size_t antecedent_true{0};
  bool holds{true};
  std::string counterexample;
  double margin{0.0};  // u_j(x) - U_j(A) at the counterexample
};

struct ComparisonReport {
  ImplicationCheck taste;        // {x} >=_i A  =>  {x} >=_j A over constant menus
  ImplicationCheck information;  // {x_A(tau)} >=_i A  =>  {x_A(tau)} >=_j A
  bool same_principal{false};
  bool same_prior{false};
  bool constant_restrictions_match{false};
  bool taste_cost_dominance{true};
  bool posterior_cost_dominance{true};
  std::vector<double> taste_cost_i, taste_cost_j;
  std::vector<double> posterior_cost_i, posterior_cost_j;
  std::vector<std::string> defects;
};

ComparisonReport compare_principals(const Environment& env_i, const ModelSpec& model_i, const Environment& env_j,
                                    const ModelSpec& model_j, const MenuFamily& family,
                                    const ComparisonSamples& samples, const SolveOptions& options = {},
                                    double tol = 1e-9);

}  // namespace persuasion
