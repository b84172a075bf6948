#include <algorithm>
#include <cmath>
#include <sstream>

#include "persuasion/audit.hpp"
#include "persuasion/concavify.hpp"
#include "persuasion/elicitation.hpp"
#include "persuasion/random.hpp"

namespace persuasion {

namespace {

void require_constant(const Menu& menu) {
  if (!menu.is_constant()) throw Error(ErrorCode::kNotConstantMenu, "menu must be constant");
}

std::vector<Lottery> lotteries_of(const Menu& menu) {
  std::vector<Lottery> out;
  for (const auto& act : menu.acts()) out.push_back(act.lottery(0));
  return out;
}

std::vector<Lottery> slice(const std::vector<Lottery>& menu, const Utility& u, double level, double tol) {
  std::vector<Lottery> out;
  for (const auto& x : menu) {
    if (std::abs(u.of(x) - level) <= tol) out.push_back(x);
  }
  return out;
}

std::vector<Lottery> half_mix(const std::vector<Lottery>& a, const std::vector<Lottery>& b) {
  std::vector<Lottery> out;
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(x.mix(y, 0.5));
  }
  return out;
}

}  // namespace

TasteDominance check_taste_dominance(const Menu& a, const Menu& b, const Utility& principal,
                                     const std::vector<Utility>& tastes, const Belief& prior, double tol) {
  require_constant(a);
  require_constant(b);
  TasteDominance out;
  const auto la = lotteries_of(a);
  const auto lb = lotteries_of(b);
  std::vector<double> levels;
  for (const auto* side : {&la, &lb}) {
    for (const auto& x : *side) levels.push_back(principal.of(x));
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end(), [&](double x, double y) { return std::abs(x - y) <= tol; }),
               levels.end());
  out.literal = true;
  for (std::size_t hi = 0; hi < levels.size() && out.literal; ++hi) {
    for (std::size_t lo = 0; lo < hi && out.literal; ++lo) {
      // A_a 1/2 B_b must contain B_a 1/2 A_b, with a the better level.
      const auto lhs = half_mix(slice(la, principal, levels[hi], tol), slice(lb, principal, levels[lo], tol));
      const auto rhs = half_mix(slice(lb, principal, levels[hi], tol), slice(la, principal, levels[lo], tol));
      for (const auto& x : rhs) {
        if (std::none_of(lhs.begin(), lhs.end(), [&](const Lottery& y) { return y.approx_equal(x, tol); })) {
          out.literal = false;
          break;
        }
      }
    }
  }
  out.functional_margin = kInfinity;
  for (const auto& v : tastes) {
    const double margin = strotz_value(a, principal, v, prior) - strotz_value(b, principal, v, prior);
    out.functional_margin = std::min(out.functional_margin, margin);
  }
  out.functional = out.functional_margin >= -tol;
  return out;
}

InformationDominance check_information_dominance(const Menu& a, const Menu& b, const Environment& env,
                                                 const ModelSpec& model, const std::vector<Belief>& posteriors,
                                                 double tol) {
  InformationDominance out;
  out.holds = true;
  out.posteriors = posteriors;
  for (const auto& p : posteriors) {
    const double margin = constant_menu_value(env, model, induce_constant_menu(a, p)) -
                          constant_menu_value(env, model, induce_constant_menu(b, p));
    out.margins.push_back(margin);
    if (margin < -tol) out.holds = false;
  }
  return out;
}

std::vector<Belief> comparison_posteriors(const Menu& a, const Menu& b, const std::vector<Utility>& tastes,
                                          const Belief& prior, std::size_t resolution) {
  auto out = PosteriorGrid(prior.size(), resolution, prior).points();
  if (prior.size() == 2) {
    for (const auto* menu : {&a, &b}) {
      for (auto& q : indifference_points(*menu, tastes)) out.push_back(std::move(q));
    }
  }
  return out;
}

bool check_joint_dominance(const Menu& a, const Menu& b, const Utility& principal, const std::vector<Utility>& tastes,
                           const std::vector<Belief>& posteriors, double tol) {
  for (const auto& p : posteriors) {
    for (const auto& v : tastes) {
      if (strotz_value(a, principal, v, p) < strotz_value(b, principal, v, p) - tol) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------- Critical sets

Menu critical_set(const Menu& constant_menu, const TasteDistribution& lambda, const Utility& principal,
                  const Belief& prior, double tie_tol) {
  require_constant(constant_menu);
  const StrotzEvaluator eval(constant_menu, principal, tie_tol);
  std::vector<Act> picks;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda.weights()[i] <= 0.0) continue;
    picks.push_back(constant_menu[eval.pick(lambda.support()[i], prior).act]);
  }
  return Menu(std::move(picks), "critical");
}

// ------------------------------------------------------ WARP and IND

namespace {

std::size_t index_of(const Menu& menu, const Act& act) {
  for (std::size_t i = 0; i < menu.size(); ++i) {
    if (menu[i].approx_equal(act)) return i;
  }
  throw Error(ErrorCode::kValidationError, "act missing from menu");
}

std::vector<double> choice_of(const Environment& env, const ModelSpec& model, const Menu& menu) {
  return within_menu_choice(env, solve_model(env, model, menu), menu);
}

bool chosen(double p, ChoiceRule rule) { return p >= rule.threshold + rule.margin; }
bool rejected(double p, ChoiceRule rule) { return p < rule.threshold - rule.margin; }

// f chosen from {f, g, h}, g chosen from {f, g}, f not chosen from {f, g}.
bool warp_holds_for(const Environment& env, const ModelSpec& model, const Act& f, const Act& g, const Menu& larger,
                    const Menu& smaller, ChoiceRule rule, std::vector<double>* pa, std::vector<double>* pb) {
  *pa = choice_of(env, model, larger);
  *pb = choice_of(env, model, smaller);
  return chosen((*pa)[index_of(larger, f)], rule) && chosen((*pb)[index_of(smaller, g)], rule) &&
         rejected((*pb)[index_of(smaller, f)], rule);
}

// f chosen from A = {f, g}; alpha f + (1 - alpha) h not chosen from A alpha {h}.
bool ind_fails_for(const Environment& env, const ModelSpec& model, const Act& f, const Act& h, double alpha,
                   const Menu& menu, const Menu& mixed, ChoiceRule rule, std::vector<double>* pa,
                   std::vector<double>* pm) {
  *pa = choice_of(env, model, menu);
  *pm = choice_of(env, model, mixed);
  return chosen((*pa)[index_of(menu, f)], rule) && rejected((*pm)[index_of(mixed, f.mix(h, alpha))], rule);
}

}  // namespace

WitnessSearch find_warp_violation(const Environment& env, const ModelSpec& model, std::uint64_t seed,
                                  std::size_t budget, ChoiceRule rule) {
  WitnessSearch out;
  Rng rng(seed);
  const std::size_t k = env.prior.size();
  const std::size_t n = env.principal.size();
  for (; out.tried < budget; ++out.tried) {
    const Act f = Act::constant(rng.lottery(n), k);
    const Act g = Act::constant(rng.lottery(n), k);
    const Act h = Act::constant(rng.lottery(n), k);
    const Menu larger({f, g, h});
    const Menu smaller({f, g});
    if (larger.size() != 3 || smaller.size() != 2) continue;
    for (const auto& [x, y] : {std::pair{f, g}, std::pair{g, f}}) {
      std::vector<double> pa, pb;
      if (warp_holds_for(env, model, x, y, larger, smaller, rule, &pa, &pb)) {
        std::ostringstream os;
        os.precision(6);
        os << "P(f | {f,g,h}) = " << pa[index_of(larger, x)] << "; P(g | {f,g}) = " << pb[index_of(smaller, y)]
           << "; P(f | {f,g}) = " << pb[index_of(smaller, x)];
        out.witness = ChoiceWitness{larger, smaller, x, y, pa, pb, 0.0, os.str()};
        ++out.tried;
        return out;
      }
    }
  }
  out.budget_exhausted = true;
  return out;
}

WitnessSearch find_ind_violation(const Environment& env, const ModelSpec& model, std::uint64_t seed,
                                 std::size_t budget, ChoiceRule rule) {
  WitnessSearch out;
  Rng rng(seed);
  const std::size_t k = env.prior.size();
  const std::size_t n = env.principal.size();
  for (; out.tried < budget; ++out.tried) {
    const Act f = Act::constant(rng.lottery(n), k);
    const Act g = Act::constant(rng.lottery(n), k);
    const Act h = Act::constant(rng.lottery(n), k);
    const Menu menu({f, g});
    if (menu.size() != 2) continue;
    for (double alpha : {0.25, 0.5, 0.75}) {
      const Menu mixed = mix_menus(menu, Menu::singleton(h), alpha);
      if (mixed.size() != 2) continue;
      for (const Act* x : {&f, &g}) {
        std::vector<double> pa, pm;
        if (ind_fails_for(env, model, *x, h, alpha, menu, mixed, rule, &pa, &pm)) {
          std::ostringstream os;
          os.precision(6);
          os << "P(f | {f,g}) = " << pa[index_of(menu, *x)] << "; P(af+(1-a)h | {f,g} a {h}) = "
             << pm[index_of(mixed, x->mix(h, alpha))] << " at a = " << alpha;
          out.witness = ChoiceWitness{menu, mixed, *x, h, pa, pm, alpha, os.str()};
          ++out.tried;
          return out;
        }
      }
    }
  }
  out.budget_exhausted = true;
  return out;
}

bool revalidate_warp(const Environment& env, const ModelSpec& model, const ChoiceWitness& witness, ChoiceRule rule) {
  std::vector<double> pa, pb;
  return warp_holds_for(env, model, witness.f, witness.g, witness.larger, witness.smaller, rule, &pa, &pb);
}

bool revalidate_ind(const Environment& env, const ModelSpec& model, const ChoiceWitness& witness, ChoiceRule rule) {
  std::vector<double> pa, pm;
  return ind_fails_for(env, model, witness.f, witness.g, witness.alpha, witness.larger, witness.smaller, rule, &pa,
                       &pm);
}

}  // namespace persuasion
