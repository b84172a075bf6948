#include "persuasion/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "persuasion/lp.hpp"

namespace persuasion {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConstantUtility: return "ConstantUtility";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kInvalidLottery: return "InvalidLottery";
    case ErrorCode::kInvalidBelief: return "InvalidBelief";
    case ErrorCode::kInvalidUtility: return "InvalidUtility";
    case ErrorCode::kEmptyMenu: return "EmptyMenu";
    case ErrorCode::kAlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kNotBayesPlausible: return "NotBayesPlausible";
    case ErrorCode::kSupportMismatch: return "SupportMismatch";
    case ErrorCode::kInvalidCostSpec: return "InvalidCostSpec";
    case ErrorCode::kGridMissingPrior: return "GridMissingPrior";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kNotConstantMenu: return "NotConstantMenu";
    case ErrorCode::kUnknownAxiom: return "UnknownAxiom";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kValidationError: return "ValidationError";
    case ErrorCode::kUnknownCommand: return "UnknownCommand";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

void check_distribution(std::span<const double> probs, ErrorCode code, const char* what) {
  if (probs.empty()) throw Error(code, std::string(what) + " is empty");
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(code, std::string(what) + " has a negative or non-finite entry");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilityTol) {
    throw Error(code, std::string(what) + " sums to " + std::to_string(total));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

// ---------------------------------------------------------------- Lottery

Lottery::Lottery(std::vector<double> probs) : probs_(std::move(probs)) {
  check_distribution(probs_, ErrorCode::kInvalidLottery, "lottery");
}

Lottery Lottery::degenerate(std::size_t n, std::size_t outcome) {
  std::vector<double> p(n, 0.0);
  p.at(outcome) = 1.0;
  return Lottery(std::move(p));
}

Lottery Lottery::uniform(std::size_t n) {
  return Lottery(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Lottery Lottery::mix(const Lottery& other, double alpha) const {
  if (other.size() != size()) throw Error(ErrorCode::kDimensionMismatch, "lottery mix");
  std::vector<double> p(size());
  for (std::size_t i = 0; i < size(); ++i) p[i] = alpha * probs_[i] + (1.0 - alpha) * other.probs_[i];
  return Lottery(std::move(p));
}

bool Lottery::approx_equal(const Lottery& other, double tol) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(probs_[i] - other.probs_[i]) > tol) return false;
  }
  return true;
}

// ----------------------------------------------------------------- Belief

Belief::Belief(std::vector<double> probs) : probs_(std::move(probs)) {
  check_distribution(probs_, ErrorCode::kInvalidBelief, "belief");
}

Belief Belief::degenerate(std::size_t k, std::size_t state) {
  std::vector<double> p(k, 0.0);
  p.at(state) = 1.0;
  return Belief(std::move(p));
}

Belief Belief::uniform(std::size_t k) {
  return Belief(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

bool Belief::approx_equal(const Belief& other, double tol) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(probs_[i] - other.probs_[i]) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------- Utility

Utility::Utility(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.size() < 2) throw Error(ErrorCode::kInvalidUtility, "utility needs two outcomes");
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  const double norm = std::sqrt(dot(weights_, weights_));
  if (std::abs(sum) > kUtilityTol) {
    throw Error(ErrorCode::kInvalidUtility, "utility weights sum to " + std::to_string(sum));
  }
  if (std::abs(norm - 1.0) > kUtilityTol) {
    throw Error(ErrorCode::kInvalidUtility, "utility norm is " + std::to_string(norm));
  }
}

double Utility::of(const Lottery& lottery) const {
  if (lottery.size() != size()) throw Error(ErrorCode::kDimensionMismatch, "utility of lottery");
  return dot(weights_, lottery.probs());
}

double Utility::min_value() const { return *std::min_element(weights_.begin(), weights_.end()); }
double Utility::max_value() const { return *std::max_element(weights_.begin(), weights_.end()); }

bool Utility::approx_equal(const Utility& other, double tol) const {
  if (other.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(weights_[i] - other.weights_[i]) > tol) return false;
  }
  return true;
}

Utility normalize_utility(std::span<const double> raw_weights) {
  if (raw_weights.size() < 2) throw Error(ErrorCode::kInvalidUtility, "utility needs two outcomes");
  const auto [lo, hi] = std::minmax_element(raw_weights.begin(), raw_weights.end());
  if (*hi - *lo <= 1e-12) throw Error(ErrorCode::kConstantUtility, "raw weights are constant");
  const double mean =
      std::accumulate(raw_weights.begin(), raw_weights.end(), 0.0) / static_cast<double>(raw_weights.size());
  std::vector<double> w(raw_weights.begin(), raw_weights.end());
  for (double& x : w) x -= mean;
  const double norm = std::sqrt(dot(w, w));
  for (double& x : w) x /= norm;
  // Re-center once more so the sum is zero to rounding.
  const double drift = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  for (double& x : w) x -= drift;
  return Utility(std::move(w));
}

// -------------------------------------------------------------------- Act

Act::Act(std::size_t states, std::size_t outcomes, std::vector<double> data)
    : states_(states), outcomes_(outcomes), data_(std::move(data)) {}

Act::Act(std::vector<Lottery> per_state) {
  if (per_state.empty()) throw Error(ErrorCode::kDimensionMismatch, "act needs at least one state");
  states_ = per_state.size();
  outcomes_ = per_state.front().size();
  data_.reserve(states_ * outcomes_);
  for (const auto& lottery : per_state) {
    if (lottery.size() != outcomes_) throw Error(ErrorCode::kDimensionMismatch, "act rows differ in size");
    data_.insert(data_.end(), lottery.probs().begin(), lottery.probs().end());
  }
}

Act Act::constant(const Lottery& lottery, std::size_t states) {
  return Act(std::vector<Lottery>(states, lottery));
}

Lottery Act::lottery(std::size_t state) const {
  auto r = row(state);
  return Lottery(std::vector<double>(r.begin(), r.end()));
}

bool Act::is_constant(double tol) const {
  for (std::size_t s = 1; s < states_; ++s) {
    for (std::size_t x = 0; x < outcomes_; ++x) {
      if (std::abs(data_[s * outcomes_ + x] - data_[x]) > tol) return false;
    }
  }
  return true;
}

Act Act::mix(const Act& other, double alpha) const {
  if (other.states_ != states_ || other.outcomes_ != outcomes_) {
    throw Error(ErrorCode::kDimensionMismatch, "act mix");
  }
  std::vector<double> d(data_.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = alpha * data_[i] + (1.0 - alpha) * other.data_[i];
  return Act(states_, outcomes_, std::move(d));
}

Lottery Act::induced_lottery(const Belief& belief) const {
  if (belief.size() != states_) throw Error(ErrorCode::kDimensionMismatch, "belief size vs act states");
  std::vector<double> p(outcomes_, 0.0);
  for (std::size_t s = 0; s < states_; ++s) {
    for (std::size_t x = 0; x < outcomes_; ++x) p[x] += belief[s] * data_[s * outcomes_ + x];
  }
  // Mixing valid rows can drift the total by a few ulps.
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return Lottery(std::move(p));
}

bool Act::approx_equal(const Act& other, double tol) const {
  if (other.states_ != states_ || other.outcomes_ != outcomes_) return false;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (std::abs(data_[i] - other.data_[i]) > tol) return false;
  }
  return true;
}

bool Act::lex_less(const Act& other) const {
  return std::lexicographical_compare(data_.begin(), data_.end(), other.data_.begin(), other.data_.end());
}

// ------------------------------------------------------------------- Menu

Menu::Menu(std::vector<Act> acts, std::string label) : label_(std::move(label)) {
  if (acts.empty()) throw Error(ErrorCode::kEmptyMenu, "menu '" + label_ + "' has no acts");
  const std::size_t k = acts.front().states();
  const std::size_t n = acts.front().outcomes();
  std::sort(acts.begin(), acts.end(), [](const Act& a, const Act& b) { return a.lex_less(b); });
  for (auto& act : acts) {
    if (act.states() != k || act.outcomes() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "menu '" + label_ + "' mixes act shapes");
    }
    const bool duplicate = std::any_of(acts_.begin(), acts_.end(),
                                       [&](const Act& kept) { return kept.approx_equal(act); });
    if (!duplicate) acts_.push_back(std::move(act));
  }
}

Menu Menu::singleton(const Act& act, std::string label) { return Menu({act}, std::move(label)); }

Menu Menu::of_lotteries(const std::vector<Lottery>& lotteries, std::size_t states, std::string label) {
  std::vector<Act> acts;
  acts.reserve(lotteries.size());
  for (const auto& l : lotteries) acts.push_back(Act::constant(l, states));
  return Menu(std::move(acts), std::move(label));
}

bool Menu::is_constant() const {
  return std::all_of(acts_.begin(), acts_.end(), [](const Act& a) { return a.is_constant(); });
}

bool Menu::contains(const Act& act, double tol) const {
  return std::any_of(acts_.begin(), acts_.end(), [&](const Act& a) { return a.approx_equal(act, tol); });
}

Menu Menu::with_label(std::string label) const {
  Menu copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

// ------------------------------------------------------------- Operations

std::vector<double> utility_act(const Utility& util, const Act& act) {
  if (util.size() != act.outcomes()) throw Error(ErrorCode::kDimensionMismatch, "utility vs act outcomes");
  std::vector<double> out(act.states());
  for (std::size_t s = 0; s < act.states(); ++s) out[s] = dot(util.weights(), act.row(s));
  return out;
}

double expected_utility(const Utility& util, const Act& act, const Belief& belief) {
  if (belief.size() != act.states()) throw Error(ErrorCode::kDimensionMismatch, "belief vs act states");
  const auto ua = utility_act(util, act);
  return dot(ua, belief.probs());
}

Menu induce_constant_menu(const Menu& menu, const Belief& belief) {
  std::vector<Act> acts;
  acts.reserve(menu.size());
  for (const auto& f : menu.acts()) acts.push_back(Act::constant(f.induced_lottery(belief), menu.states()));
  return Menu(std::move(acts), menu.label());
}

Menu mix_menus(const Menu& a, const Menu& b, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kAlphaOutOfRange, "alpha = " + std::to_string(alpha));
  }
  if (alpha == 1.0) return a;
  if (alpha == 0.0) return b;
  std::vector<Act> acts;
  acts.reserve(a.size() * b.size());
  for (const auto& f : a.acts()) {
    for (const auto& g : b.acts()) acts.push_back(f.mix(g, alpha));
  }
  return Menu(std::move(acts));
}

Menu reduce_menu(const Menu& menu) {
  if (menu.size() <= 2) return menu;
  std::vector<Act> kept = menu.acts();
  // An act is dropped when it is a convex combination of the remaining acts;
  // dropping it leaves the hull unchanged, so later tests use the shrunk set.
  for (std::size_t i = 0; i < kept.size();) {
    if (kept.size() <= 1) break;
    lp::Problem feas;
    feas.num_vars = kept.size() - 1;
    feas.objective.assign(feas.num_vars, 0.0);
    const auto target = kept[i].flat();
    for (std::size_t d = 0; d < target.size(); ++d) {
      std::vector<double> row;
      row.reserve(feas.num_vars);
      for (std::size_t j = 0; j < kept.size(); ++j) {
        if (j != i) row.push_back(kept[j].flat()[d]);
      }
      feas.rows.push_back(std::move(row));
      feas.rhs.push_back(target[d]);
    }
    feas.rows.emplace_back(feas.num_vars, 1.0);
    feas.rhs.push_back(1.0);
    if (lp::feasible(feas)) {
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return Menu(std::move(kept), menu.label());
}

}  // namespace persuasion
