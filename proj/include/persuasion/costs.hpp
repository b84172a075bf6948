#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/concavify.hpp"
#include "persuasion/domain.hpp"
#include "persuasion/strotz.hpp"

namespace persuasion {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Psi { kEntropy, kQuadratic };

std::string_view to_string(Psi psi);
/// Entropy: sum q ln q (0 ln 0 = 0). Quadratic: sum q^2.
double psi_value(Psi psi, const Belief& q);
/// Gradient of psi at an interior belief.
std::vector<double> psi_gradient(Psi psi, const Belief& q);

/// Information cost over signal structures: either the indicator of a
/// constraint set (all Bayes-plausible structures, or the hull of a finite
/// list) or kappa * (E psi(q) - psi(p0)).
class PosteriorCostSpec {
 public:
  enum class Kind { kConstraint, kSeparable };

  static PosteriorCostSpec full_constraint();
  static PosteriorCostSpec finite_constraint(std::vector<SignalStructure> members);
  /// Rejects psi that fails convexity on 200 sampled collinear triples in
  /// the k-simplex.
  static PosteriorCostSpec separable(Psi psi, double kappa, std::size_t states);

  Kind kind() const noexcept { return kind_; }
  bool is_full() const noexcept { return kind_ == Kind::kConstraint && members_.empty(); }
  const std::vector<SignalStructure>& members() const noexcept { return members_; }
  Psi psi() const noexcept { return psi_; }
  double kappa() const noexcept { return kappa_; }

  std::string describe() const;

 private:
  Kind kind_{Kind::kConstraint};
  std::vector<SignalStructure> members_;
  Psi psi_{Psi::kEntropy};
  double kappa_{0.0};
};

/// Throws kNotBayesPlausible when tau's barycenter misses the prior by more than 1e-8.
double posterior_cost(const PosteriorCostSpec& spec, const SignalStructure& tau, const Belief& prior);

/// True when tau lies in the convex hull of the listed structures (LP at 1e-8).
bool in_signal_hull(const SignalStructure& tau, const std::vector<SignalStructure>& members);

/// Taste-management cost over distributions on a fixed finite taste grid.
class TasteCostSpec {
 public:
  enum class Kind { kFixed, kLinear, kDivergence };

  static TasteCostSpec fixed(std::vector<Utility> grid, TasteDistribution reference);
  /// penalty[i] >= 0 for grid[i], zero on the support of the reference.
  static TasteCostSpec linear(std::vector<Utility> grid, TasteDistribution reference, std::vector<double> penalty);
  static TasteCostSpec divergence(std::vector<Utility> grid, TasteDistribution reference, double kappa);

  Kind kind() const noexcept { return kind_; }
  const std::vector<Utility>& grid() const noexcept { return grid_; }
  const TasteDistribution& reference() const noexcept { return reference_; }
  /// Reference weights aligned with grid().
  const std::vector<double>& reference_weights() const noexcept { return reference_weights_; }
  const std::vector<double>& penalty() const noexcept { return penalty_; }
  double kappa() const noexcept { return kappa_; }

  /// Same kind and reference with kappa (divergence) or penalties (linear) scaled.
  TasteCostSpec scaled(double factor) const;
  std::string describe() const;

 private:
  TasteCostSpec(Kind kind, std::vector<Utility> grid, TasteDistribution reference);

  Kind kind_;
  std::vector<Utility> grid_;
  TasteDistribution reference_;
  std::vector<double> reference_weights_;
  std::vector<double> penalty_;
  double kappa_{0.0};
};

double taste_cost(const TasteCostSpec& spec, const TasteDistribution& lambda);

struct TasteStage {
  double value{0.0};
  std::vector<double> weights;  // lambda* aligned with the spec grid
};

/// max_lambda [sum_v lambda(v) phi(v) - c_V(lambda)] for phi given on the spec grid.
TasteStage taste_stage_from_phi(const TasteCostSpec& spec, const std::vector<double>& phi);

struct InnerStage {
  double value{0.0};
  TasteDistribution lambda_star;
};

InnerStage inner_taste_stage(const Menu& menu, const Utility& principal, const Belief& belief,
                             const TasteCostSpec& spec, double tie_tol = kDefaultTieTol);

struct JointCostSpec {
  PosteriorCostSpec posterior;
  TasteCostSpec taste;
};

/// c_P(marginal) + sum_p marginal(p) c_V(conditional_p).
double joint_cost(const JointCostSpec& spec, const JointDistribution& pi, const Belief& prior);

/// kappa * KL(pi || reference) over (belief, taste) atoms; +inf off the reference support.
struct DivergenceJointSpec {
  double kappa{1.0};
  JointDistribution reference;
};

double divergence_joint_cost(const DivergenceJointSpec& spec, const JointDistribution& pi);

/// Marginal over posteriors of a joint distribution.
SignalStructure posterior_marginal(const JointDistribution& pi);

}  // namespace persuasion
