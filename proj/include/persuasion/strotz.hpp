#pragma once

#include <cstddef>
#include <limits>
#include <mutex>
#include <vector>

#include "persuasion/domain.hpp"

namespace persuasion {

inline constexpr double kDefaultTieTol = 1e-9;

/// Finite-support distribution over tastes.
class TasteDistribution {
 public:
  TasteDistribution(std::vector<Utility> support, std::vector<double> weights);

  static TasteDistribution degenerate(const Utility& taste);

  std::size_t size() const noexcept { return support_.size(); }
  const std::vector<Utility>& support() const noexcept { return support_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// Weight on `taste`, 0 when absent.
  double weight_of(const Utility& taste) const;
  /// Weights laid out over `grid`; throws kSupportMismatch when a support
  /// point with positive weight is missing from the grid.
  std::vector<double> weights_on(const std::vector<Utility>& grid) const;
  static TasteDistribution from_grid(const std::vector<Utility>& grid, const std::vector<double>& weights);

  bool approx_equal(const TasteDistribution& other, double tol = 1e-12) const;

 private:
  std::vector<Utility> support_;
  std::vector<double> weights_;
};

struct JointAtom {
  Belief belief;
  Utility taste;
  double weight;
};

/// Finite-support distribution over (posterior, taste) pairs.
class JointDistribution {
 public:
  explicit JointDistribution(std::vector<JointAtom> atoms);

  const std::vector<JointAtom>& atoms() const noexcept { return atoms_; }
  Belief barycenter() const;
  bool is_bayes_plausible(const Belief& prior, double tol = 1e-10) const;

  /// Distinct beliefs with their marginal weights and conditional taste laws.
  struct Slice {
    Belief belief;
    double weight;
    TasteDistribution conditional;
  };
  std::vector<Slice> slices() const;

 private:
  std::vector<JointAtom> atoms_;
};

struct ArgmaxResult {
  std::vector<std::size_t> acts;  // indices into the menu
  double tie_diameter{0.0};       // spread of agent values inside the tie set
};

/// Acts whose agent expected utility is within tie_tol of the maximum.
ArgmaxResult agent_argmax(const Menu& menu, const Utility& taste, const Belief& belief,
                          double tie_tol = kDefaultTieTol);

/// Principal-optimistic Strotz value max_{f in argmax_v} u(f).p.
double strotz_value(const Menu& menu, const Utility& principal, const Utility& taste, const Belief& belief,
                    double tie_tol = kDefaultTieTol);

double random_strotz_value(const Menu& menu, const Utility& principal, const TasteDistribution& lambda,
                           const Belief& belief, double tie_tol = kDefaultTieTol);

double joint_benefit(const Menu& menu, const Utility& principal, const JointDistribution& pi,
                     double tie_tol = kDefaultTieTol);

/// Precomputes per-state utility acts of one menu so that repeated Strotz
/// evaluations over grids cost O(|A| k) each.
class StrotzEvaluator {
 public:
  StrotzEvaluator(const Menu& menu, const Utility& principal, double tie_tol = kDefaultTieTol);

  struct Pick {
    double value;
    std::size_t act;  // first act attaining the principal-optimal value
    double tie_diameter;
  };

  Pick pick(const Utility& taste, const Belief& belief) const;
  double value(const Utility& taste, const Belief& belief) const { return pick(taste, belief).value; }
  double principal_value(std::size_t act, const Belief& belief) const;

  const Menu& menu() const noexcept { return menu_; }
  const Utility& principal() const noexcept { return principal_; }

 private:
  Menu menu_;
  Utility principal_;
  double tie_tol_;
  std::vector<std::vector<double>> principal_acts_;
};

/// Lazily filled phi(p_i, v_j) table over fixed belief and taste lists.
/// Safe for concurrent use; values are deterministic regardless of fill order.
class PhiCache {
 public:
  PhiCache(const StrotzEvaluator& evaluator, const std::vector<Belief>& beliefs,
           const std::vector<Utility>& tastes);

  double at(std::size_t belief_index, std::size_t taste_index) const;
  std::size_t beliefs() const noexcept { return beliefs_.size(); }
  std::size_t tastes() const noexcept { return tastes_.size(); }

 private:
  const StrotzEvaluator& evaluator_;
  const std::vector<Belief>& beliefs_;
  const std::vector<Utility>& tastes_;
  mutable std::mutex mutex_;
  mutable std::vector<double> table_;
};

}  // namespace persuasion
