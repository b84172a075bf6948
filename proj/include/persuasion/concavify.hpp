#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "persuasion/domain.hpp"
#include "persuasion/strotz.hpp"

namespace persuasion {

/// Default lattice resolution by number of states (2 -> 100, 3 -> 40, 4 -> 12).
std::size_t default_grid_resolution(std::size_t states);

/// Simplex lattice {0, 1/G, ..., 1}^k restricted to the simplex, plus the
/// prior and any extra points. Lattice points come first in lexicographic
/// order, then the prior (if off-lattice), then extras in insertion order.
class PosteriorGrid {
 public:
  PosteriorGrid(std::size_t states, std::size_t resolution, const Belief& prior,
                std::vector<Belief> extras = {});

  std::size_t resolution() const noexcept { return resolution_; }
  std::size_t states() const noexcept { return states_; }
  std::size_t size() const noexcept { return points_.size(); }
  std::size_t lattice_size() const noexcept { return lattice_size_; }
  const std::vector<Belief>& points() const noexcept { return points_; }
  const Belief& operator[](std::size_t i) const { return points_[i]; }
  const Belief& prior() const noexcept { return points_[prior_index_]; }
  std::size_t prior_index() const noexcept { return prior_index_; }

  /// Index of a point equal to `belief` within tol, or size() when absent.
  std::size_t find(const Belief& belief, double tol = 1e-12) const;
  bool contains(const Belief& belief, double tol = 1e-12) const { return find(belief, tol) < size(); }

  /// Same lattice and prior with more extra points appended (duplicates skipped).
  PosteriorGrid with_extras(const std::vector<Belief>& more) const;
  /// Same configuration at resolution 2G.
  PosteriorGrid refined() const;

 private:
  std::size_t states_;
  std::size_t resolution_;
  std::size_t lattice_size_{0};
  std::size_t prior_index_{0};
  std::vector<Belief> points_;
  std::vector<Belief> extras_;
};

/// Finite distribution over posteriors.
class SignalStructure {
 public:
  SignalStructure(std::vector<Belief> posteriors, std::vector<double> weights);

  static SignalStructure uninformative(const Belief& prior);

  std::size_t size() const noexcept { return posteriors_.size(); }
  const std::vector<Belief>& posteriors() const noexcept { return posteriors_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  Belief barycenter() const;
  bool is_bayes_plausible(const Belief& prior, double tol = 1e-8) const;
  /// Drops atoms with weight <= threshold, merges equal posteriors, renormalizes.
  SignalStructure pruned(double threshold = 1e-10) const;

 private:
  std::vector<Belief> posteriors_;
  std::vector<double> weights_;
};

/// Fully informative structure: point masses on each state weighted by the prior.
SignalStructure full_information(const Belief& prior);

struct ValueProfile {
  PosteriorGrid grid;
  std::vector<double> values;
};

using StageValue = std::function<double(const Belief&)>;

ValueProfile value_profile(const StageValue& stage_value, const PosteriorGrid& grid);

struct EnvelopeResult {
  double value{0.0};
  SignalStructure tau_star;
  double lp_residual{0.0};
};

/// Upper concave envelope of the profile evaluated at p0, solved as
/// max sum w_i g(q_i) s.t. sum w_i q_i = p0, w >= 0. Throws kGridMissingPrior
/// when p0 is not a grid point.
EnvelopeResult concave_envelope_at(const ValueProfile& profile, const Belief& prior);

/// Beliefs where some taste in `tastes` is indifferent between two of its
/// top-ranked acts in the menu (two-state only; empty for k != 2). These are the kinks of the
/// Strotz profile.
std::vector<Belief> indifference_points(const Menu& menu, const std::vector<Utility>& tastes);

}  // namespace persuasion
