#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "persuasion/domain.hpp"

namespace persuasion {

/// Seeded sampler. Uses the raw mt19937_64 stream (not std distributions) so
/// draws are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }
  std::uint64_t next() { return engine_(); }

  /// Uniform draw from the probability simplex of dimension n.
  std::vector<double> simplex(std::size_t n) {
    std::vector<double> w(n);
    double total = 0.0;
    for (auto& x : w) {
      x = -std::log(1.0 - uniform());
      total += x;
    }
    for (auto& x : w) x /= total;
    return w;
  }

  Lottery lottery(std::size_t n) { return Lottery(normalized(simplex(n))); }
  Belief belief(std::size_t k) { return Belief(normalized(simplex(k))); }

  Act act(std::size_t k, std::size_t n) {
    std::vector<Lottery> rows;
    rows.reserve(k);
    for (std::size_t s = 0; s < k; ++s) rows.push_back(lottery(n));
    return Act(std::move(rows));
  }

  Menu menu(std::size_t k, std::size_t n, std::size_t max_acts) {
    const std::size_t size = 1 + index(max_acts);
    std::vector<Act> acts;
    for (std::size_t i = 0; i < size; ++i) acts.push_back(act(k, n));
    return Menu(std::move(acts));
  }

  Menu constant_menu(std::size_t k, std::size_t n, std::size_t max_acts) {
    const std::size_t size = 1 + index(max_acts);
    std::vector<Lottery> lotteries;
    for (std::size_t i = 0; i < size; ++i) lotteries.push_back(lottery(n));
    return Menu::of_lotteries(lotteries, k);
  }

  Utility utility(std::size_t n) {
    std::vector<double> w(n);
    for (auto& x : w) x = uniform(-1.0, 1.0);
    return normalize_utility(w);
  }

 private:
  // Folds summation drift into the largest entry so the total is 1 to rounding.
  static std::vector<double> normalized(std::vector<double> w) {
    double total = 0.0;
    std::size_t big = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      total += w[i];
      if (w[i] > w[big]) big = i;
    }
    w[big] += 1.0 - total;
    return w;
  }

  std::mt19937_64 engine_;
};

}  // namespace persuasion
