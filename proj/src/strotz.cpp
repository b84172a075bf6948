#include "persuasion/strotz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace persuasion {

// ---------------------------------------------------- TasteDistribution

TasteDistribution::TasteDistribution(std::vector<Utility> support, std::vector<double> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (support_.empty() || support_.size() != weights_.size()) {
    throw Error(ErrorCode::kSupportMismatch, "taste distribution support/weight sizes differ");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw Error(ErrorCode::kSupportMismatch, "negative taste weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::kSupportMismatch, "taste weights sum to " + std::to_string(total));
  }
  for (std::size_t i = 0; i < support_.size(); ++i) {
    for (std::size_t j = i + 1; j < support_.size(); ++j) {
      if (support_[i].approx_equal(support_[j])) {
        throw Error(ErrorCode::kSupportMismatch, "taste support has duplicate entries");
      }
    }
  }
}

TasteDistribution TasteDistribution::degenerate(const Utility& taste) { return TasteDistribution({taste}, {1.0}); }

double TasteDistribution::weight_of(const Utility& taste) const {
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (support_[i].approx_equal(taste)) return weights_[i];
  }
  return 0.0;
}

std::vector<double> TasteDistribution::weights_on(const std::vector<Utility>& grid) const {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < support_.size(); ++i) {
    bool found = false;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (grid[g].approx_equal(support_[i])) {
        out[g] += weights_[i];
        found = true;
        break;
      }
    }
    if (!found && weights_[i] > 0.0) {
      throw Error(ErrorCode::kSupportMismatch, "taste distribution puts mass off the taste grid");
    }
  }
  return out;
}

TasteDistribution TasteDistribution::from_grid(const std::vector<Utility>& grid, const std::vector<double>& weights) {
  if (grid.size() != weights.size()) throw Error(ErrorCode::kSupportMismatch, "grid/weight sizes differ");
  std::vector<Utility> support;
  std::vector<double> w;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (weights[i] > 0.0) {
      support.push_back(grid[i]);
      w.push_back(weights[i]);
    }
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return TasteDistribution(std::move(support), std::move(w));
}

bool TasteDistribution::approx_equal(const TasteDistribution& other, double tol) const {
  auto covered = [tol](const TasteDistribution& a, const TasteDistribution& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a.weights_[i] - b.weight_of(a.support_[i])) > tol) return false;
    }
    return true;
  };
  return covered(*this, other) && covered(other, *this);
}

// ---------------------------------------------------- JointDistribution

JointDistribution::JointDistribution(std::vector<JointAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error(ErrorCode::kSupportMismatch, "joint distribution has no atoms");
  double total = 0.0;
  for (const auto& a : atoms_) {
    if (!(a.weight >= 0.0)) throw Error(ErrorCode::kSupportMismatch, "negative joint weight");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(ErrorCode::kSupportMismatch, "joint weights sum to " + std::to_string(total));
  }
}

Belief JointDistribution::barycenter() const {
  std::vector<double> p(atoms_.front().belief.size(), 0.0);
  for (const auto& a : atoms_) {
    for (std::size_t s = 0; s < p.size(); ++s) p[s] += a.weight * a.belief[s];
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return Belief(std::move(p));
}

bool JointDistribution::is_bayes_plausible(const Belief& prior, double tol) const {
  return barycenter().approx_equal(prior, tol);
}

std::vector<JointDistribution::Slice> JointDistribution::slices() const {
  struct Group {
    Belief belief;
    double weight;
    std::vector<Utility> tastes;
    std::vector<double> mass;
  };
  std::vector<Group> groups;
  for (const auto& a : atoms_) {
    if (a.weight <= 0.0) continue;
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.belief.approx_equal(a.belief, 1e-12); });
    if (it == groups.end()) {
      groups.push_back({a.belief, 0.0, {}, {}});
      it = std::prev(groups.end());
    }
    it->weight += a.weight;
    auto t = std::find_if(it->tastes.begin(), it->tastes.end(),
                          [&](const Utility& v) { return v.approx_equal(a.taste); });
    if (t == it->tastes.end()) {
      it->tastes.push_back(a.taste);
      it->mass.push_back(a.weight);
    } else {
      it->mass[static_cast<std::size_t>(t - it->tastes.begin())] += a.weight;
    }
  }
  std::vector<Slice> out;
  for (auto& g : groups) {
    for (double& m : g.mass) m /= g.weight;
    const double total = std::accumulate(g.mass.begin(), g.mass.end(), 0.0);
    for (double& m : g.mass) m /= total;
    out.push_back({g.belief, g.weight, TasteDistribution(g.tastes, g.mass)});
  }
  return out;
}

// ------------------------------------------------------------ Selection

ArgmaxResult agent_argmax(const Menu& menu, const Utility& taste, const Belief& belief, double tie_tol) {
  std::vector<double> values(menu.size());
  for (std::size_t i = 0; i < menu.size(); ++i) values[i] = expected_utility(taste, menu[i], belief);
  const double best = *std::max_element(values.begin(), values.end());
  ArgmaxResult out;
  double lowest = best;
  for (std::size_t i = 0; i < menu.size(); ++i) {
    if (values[i] >= best - tie_tol) {
      out.acts.push_back(i);
      lowest = std::min(lowest, values[i]);
    }
  }
  out.tie_diameter = best - lowest;
  return out;
}

double strotz_value(const Menu& menu, const Utility& principal, const Utility& taste, const Belief& belief,
                    double tie_tol) {
  const auto chosen = agent_argmax(menu, taste, belief, tie_tol);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i : chosen.acts) best = std::max(best, expected_utility(principal, menu[i], belief));
  return best;
}

double random_strotz_value(const Menu& menu, const Utility& principal, const TasteDistribution& lambda,
                           const Belief& belief, double tie_tol) {
  double total = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda.weights()[i] == 0.0) continue;
    total += lambda.weights()[i] * strotz_value(menu, principal, lambda.support()[i], belief, tie_tol);
  }
  return total;
}

double joint_benefit(const Menu& menu, const Utility& principal, const JointDistribution& pi, double tie_tol) {
  double total = 0.0;
  for (const auto& atom : pi.atoms()) {
    if (atom.weight == 0.0) continue;
    total += atom.weight * strotz_value(menu, principal, atom.taste, atom.belief, tie_tol);
  }
  return total;
}

// ------------------------------------------------------------ Evaluator

StrotzEvaluator::StrotzEvaluator(const Menu& menu, const Utility& principal, double tie_tol)
    : menu_(menu), principal_(principal), tie_tol_(tie_tol) {
  principal_acts_.reserve(menu_.size());
  for (const auto& f : menu_.acts()) principal_acts_.push_back(utility_act(principal_, f));
}

double StrotzEvaluator::principal_value(std::size_t act, const Belief& belief) const {
  const auto& ua = principal_acts_[act];
  double v = 0.0;
  for (std::size_t s = 0; s < ua.size(); ++s) v += belief[s] * ua[s];
  return v;
}

StrotzEvaluator::Pick StrotzEvaluator::pick(const Utility& taste, const Belief& belief) const {
  const std::size_t m = menu_.size();
  std::vector<double> agent(m);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const Act& f = menu_[i];
    double a = 0.0;
    for (std::size_t s = 0; s < f.states(); ++s) {
      if (belief[s] == 0.0) continue;
      const auto row = f.row(s);
      double r = 0.0;
      for (std::size_t x = 0; x < row.size(); ++x) r += row[x] * taste[x];
      a += belief[s] * r;
    }
    agent[i] = a;
    best = std::max(best, agent[i]);
  }
  Pick out{-std::numeric_limits<double>::infinity(), 0, 0.0};
  double lowest = best;
  for (std::size_t i = 0; i < m; ++i) {
    if (agent[i] < best - tie_tol_) continue;
    lowest = std::min(lowest, agent[i]);
    const double v = principal_value(i, belief);
    if (v > out.value) {
      out.value = v;
      out.act = i;
    }
  }
  out.tie_diameter = best - lowest;
  return out;
}

// -------------------------------------------------------------- PhiCache

PhiCache::PhiCache(const StrotzEvaluator& evaluator, const std::vector<Belief>& beliefs,
                   const std::vector<Utility>& tastes)
    : evaluator_(evaluator),
      beliefs_(beliefs),
      tastes_(tastes),
      table_(beliefs.size() * tastes.size(), std::numeric_limits<double>::quiet_NaN()) {}

double PhiCache::at(std::size_t belief_index, std::size_t taste_index) const {
  const std::size_t slot = belief_index * tastes_.size() + taste_index;
  {
    std::lock_guard lock(mutex_);
    if (!std::isnan(table_[slot])) return table_[slot];
  }
  const double v = evaluator_.value(tastes_[taste_index], beliefs_[belief_index]);
  std::lock_guard lock(mutex_);
  table_[slot] = v;
  return v;
}

}  // namespace persuasion
