#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "persuasion/error.hpp"

namespace persuasion {

inline constexpr double kProbabilityTol = 1e-12;
inline constexpr double kUtilityTol = 1e-10;
inline constexpr double kActEqualityTol = 1e-12;

/// Probability vector over the n outcomes.
class Lottery {
 public:
  explicit Lottery(std::vector<double> probs);

  static Lottery degenerate(std::size_t n, std::size_t outcome);
  static Lottery uniform(std::size_t n);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

  /// alpha * this + (1 - alpha) * other.
  Lottery mix(const Lottery& other, double alpha) const;

  bool approx_equal(const Lottery& other, double tol = kProbabilityTol) const;

 private:
  std::vector<double> probs_;
};

/// Belief over the k states.
class Belief {
 public:
  explicit Belief(std::vector<double> probs);

  static Belief degenerate(std::size_t k, std::size_t state);
  static Belief uniform(std::size_t k);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

  bool approx_equal(const Belief& other, double tol) const;

 private:
  std::vector<double> probs_;
};

/// Normalized taste: weights sum to zero and have unit Euclidean norm.
class Utility {
 public:
  /// Validates an already normalized vector.
  explicit Utility(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

  double of(const Lottery& lottery) const;
  double min_value() const;
  double max_value() const;

  bool approx_equal(const Utility& other, double tol = kUtilityTol) const;

 private:
  std::vector<double> weights_;
};

/// (w - mean(w)) / ||w - mean(w)||; throws kConstantUtility when w is flat.
Utility normalize_utility(std::span<const double> raw_weights);

/// State-to-lottery map stored as a k x n row-stochastic matrix.
class Act {
 public:
  explicit Act(std::vector<Lottery> per_state);
  static Act constant(const Lottery& lottery, std::size_t states);

  std::size_t states() const noexcept { return states_; }
  std::size_t outcomes() const noexcept { return outcomes_; }

  std::span<const double> row(std::size_t state) const {
    return {data_.data() + state * outcomes_, outcomes_};
  }
  Lottery lottery(std::size_t state) const;
  std::span<const double> flat() const noexcept { return data_; }

  bool is_constant(double tol = kActEqualityTol) const;
  Act mix(const Act& other, double alpha) const;
  /// f^p(x) = sum_s p(s) f(s)(x).
  Lottery induced_lottery(const Belief& belief) const;

  bool approx_equal(const Act& other, double tol = kActEqualityTol) const;
  /// Lexicographic order on the flattened matrix.
  bool lex_less(const Act& other) const;

 private:
  Act(std::size_t states, std::size_t outcomes, std::vector<double> data);

  std::size_t states_{0};
  std::size_t outcomes_{0};
  std::vector<double> data_;
};

/// Finite nonempty set of acts, deduplicated and kept in canonical order.
class Menu {
 public:
  explicit Menu(std::vector<Act> acts, std::string label = {});

  static Menu singleton(const Act& act, std::string label = {});
  static Menu of_lotteries(const std::vector<Lottery>& lotteries, std::size_t states,
                           std::string label = {});

  std::size_t size() const noexcept { return acts_.size(); }
  const Act& operator[](std::size_t i) const { return acts_[i]; }
  const std::vector<Act>& acts() const noexcept { return acts_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t states() const { return acts_.front().states(); }
  std::size_t outcomes() const { return acts_.front().outcomes(); }

  bool is_constant() const;
  bool contains(const Act& act, double tol = kActEqualityTol) const;
  Menu with_label(std::string label) const;

 private:
  std::vector<Act> acts_;
  std::string label_;
};

/// Expected principal-style utility sum_s p(s) sum_x f(s)(x) u(x).
double expected_utility(const Utility& util, const Act& act, const Belief& belief);

/// Per-state utility vector (w(f(s)))_s of an act.
std::vector<double> utility_act(const Utility& util, const Act& act);

Menu induce_constant_menu(const Menu& menu, const Belief& belief);

/// {alpha f + (1 - alpha) g : f in a, g in b}.
Menu mix_menus(const Menu& a, const Menu& b, double alpha);

/// Keeps only the acts that are extreme points of co(menu).
Menu reduce_menu(const Menu& menu);

}  // namespace persuasion
