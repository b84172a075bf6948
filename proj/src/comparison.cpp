#include <algorithm>
#include <cmath>
#include <sstream>

#include "persuasion/elicitation.hpp"
#include "persuasion/parallel.hpp"

namespace persuasion {

// -------------------------------------------------------------- Round trip

std::vector<SignalStructure> two_point_structures(const Belief& prior, std::size_t resolution) {
  if (prior.size() != 2) throw Error(ErrorCode::kDimensionMismatch, "two-point structures need two states");
  std::vector<SignalStructure> out{SignalStructure::uninformative(prior)};
  const double p = prior[0];
  for (std::size_t l = 0; l <= resolution; ++l) {
    const double a = static_cast<double>(l) / static_cast<double>(resolution);
    if (a >= p - 1e-12) break;
    for (std::size_t r = resolution + 1; r-- > 0;) {
      const double b = static_cast<double>(r) / static_cast<double>(resolution);
      if (b <= p + 1e-12) break;
      const double w = (b - p) / (b - a);
      out.emplace_back(std::vector<Belief>{Belief({a, 1.0 - a}), Belief({b, 1.0 - b})},
                       std::vector<double>{w, 1.0 - w});
    }
  }
  return out;
}

std::vector<TasteDistribution> taste_lattice(const std::vector<Utility>& support, std::size_t resolution) {
  const std::size_t m = support.size();
  std::vector<TasteDistribution> out;
  std::vector<std::size_t> counts(m, 0);
  // Enumerate compositions of `resolution` into m parts in lexicographic order.
  auto recurse = [&](auto&& self, std::size_t part, std::size_t left) -> void {
    if (part + 1 == m) {
      counts[part] = left;
      std::vector<double> w(m);
      for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(counts[i]) / static_cast<double>(resolution);
      out.push_back(TasteDistribution::from_grid(support, w));
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[part] = c;
      self(self, part + 1, left - c);
    }
  };
  recurse(recurse, 0, resolution);
  return out;
}

ElicitedSequential::ElicitedSequential(Environment env, std::vector<SignalStructure> structures,
                                       std::vector<double> posterior_costs, std::vector<TasteDistribution> tastes,
                                       std::vector<double> taste_costs)
    : env_(std::move(env)),
      structures_(std::move(structures)),
      posterior_costs_(std::move(posterior_costs)),
      tastes_(std::move(tastes)),
      taste_costs_(std::move(taste_costs)) {
  if (structures_.size() != posterior_costs_.size() || structures_.empty()) {
    throw Error(ErrorCode::kValidationError, "elicited costs are misaligned");
  }
  collect_support();
}

ElicitedSequential::ElicitedSequential(Environment env, PosteriorCostOracle oracle, std::vector<Belief> posteriors,
                                       std::vector<TasteDistribution> tastes, std::vector<double> taste_costs)
    : env_(std::move(env)),
      oracle_(std::move(oracle)),
      posteriors_(std::move(posteriors)),
      tastes_(std::move(tastes)),
      taste_costs_(std::move(taste_costs)) {
  if (env_.prior.size() != 2) throw Error(ErrorCode::kDimensionMismatch, "candidate signals need two states");
  if (!oracle_) throw Error(ErrorCode::kValidationError, "missing posterior cost oracle");
  collect_support();
}

void ElicitedSequential::collect_support() {
  if (tastes_.size() != taste_costs_.size() || tastes_.empty()) {
    throw Error(ErrorCode::kValidationError, "elicited costs are misaligned");
  }
  for (const auto& lambda : tastes_) {
    for (const auto& v : lambda.support()) {
      if (std::none_of(support_.begin(), support_.end(), [&](const Utility& w) { return w.approx_equal(v); })) {
        support_.push_back(v);
      }
    }
  }
}

double ElicitedSequential::stage(const Menu& menu, const Belief& q) const {
  std::vector<double> phi(support_.size());
  for (std::size_t i = 0; i < support_.size(); ++i) phi[i] = strotz_value(menu, env_.principal, support_[i], q, env_.tie_tol);
  double best = -kInfinity;
  for (std::size_t l = 0; l < tastes_.size(); ++l) {
    const auto w = tastes_[l].weights_on(support_);
    double b = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) b += w[i] * phi[i];
    best = std::max(best, b - taste_costs_[l]);
  }
  return best;
}

double ElicitedSequential::value(const Menu& menu) const {
  std::vector<SignalStructure> local;
  std::vector<double> local_costs;
  if (oracle_) {
    std::vector<double> points;
    for (const auto& q : posteriors_) points.push_back(q[0]);
    for (const auto& q : indifference_points(menu, support_)) points.push_back(q[0]);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 points.end());
    const double p = env_.prior[0];
    local.push_back(SignalStructure::uninformative(env_.prior));
    for (double a : points) {
      if (a >= p - 1e-12) continue;
      for (double b : points) {
        if (b <= p + 1e-12) continue;
        const double w = (b - p) / (b - a);
        local.emplace_back(std::vector<Belief>{Belief({a, 1.0 - a}), Belief({b, 1.0 - b})},
                           std::vector<double>{w, 1.0 - w});
      }
    }
    local_costs = oracle_(local);
  }
  const auto& structures = oracle_ ? local : structures_;
  const auto& costs = oracle_ ? local_costs : posterior_costs_;
  std::vector<Belief> seen;
  std::vector<double> cached;
  auto stage_at = [&](const Belief& q) {
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (seen[i].approx_equal(q, 1e-12)) return cached[i];
    }
    seen.push_back(q);
    cached.push_back(stage(menu, q));
    return cached.back();
  };
  double best = -kInfinity;
  for (std::size_t j = 0; j < structures.size(); ++j) {
    double v = -costs[j];
    for (std::size_t i = 0; i < structures[j].size(); ++i) {
      v += structures[j].weights()[i] * stage_at(structures[j].posteriors()[i]);
    }
    best = std::max(best, v);
  }
  return best;
}

// ------------------------------------------------------- Comparative statics

namespace {

std::string describe_lottery(const Lottery& x) {
  std::ostringstream os;
  os.precision(9);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

Lottery mix_lotteries(const std::vector<Lottery>& parts, const std::vector<double>& weights) {
  std::vector<double> p(parts.front().size(), 0.0);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t x = 0; x < p.size(); ++x) p[x] += weights[i] * parts[i][x];
  }
  double total = 0.0;
  for (double x : p) total += x;
  for (double& x : p) x /= total;
  return Lottery(std::move(p));
}

void record(ImplicationCheck& check, bool antecedent, bool consequent, double margin, const std::string& what) {
  ++check.tested;
  if (!antecedent) return;
  ++check.antecedent_true;
  if (!consequent && check.holds) {
    check.holds = false;
    check.counterexample = what;
    check.margin = margin;
  }
}

}  // namespace

ComparisonReport compare_principals(const Environment& env_i, const ModelSpec& model_i, const Environment& env_j,
                                    const ModelSpec& model_j, const MenuFamily& family,
                                    const ComparisonSamples& samples, const SolveOptions& options, double tol) {
  ComparisonReport report;
  report.same_principal = env_i.principal.approx_equal(env_j.principal);
  report.same_prior = env_i.prior.approx_equal(env_j.prior, 1e-12);

  const Elicitor ei(env_i, model_i, family, options);
  const Elicitor ej(env_j, model_j, family, options);
  const auto& ui = env_i.principal;
  const auto& uj = env_j.principal;

  // (i) over sampled constant menus and the constant family members.
  std::vector<Menu> constants = samples.constant_menus;
  std::vector<double> value_i, value_j;
  for (std::size_t f = 0; f < family.size(); ++f) {
    if (family.menus[f].is_constant()) constants.push_back(family.menus[f]);
  }
  value_i.resize(constants.size());
  value_j.resize(constants.size());
  parallel_for(constants.size(), [&](std::size_t a) {
    value_i[a] = constant_menu_value(env_i, model_i, constants[a]);
    value_j[a] = constant_menu_value(env_j, model_j, constants[a]);
  });
  report.constant_restrictions_match = true;
  Rng rng(samples.seed);
  const std::size_t n = ui.size();
  for (std::size_t a = 0; a < constants.size(); ++a) {
    if (std::abs(value_i[a] - value_j[a]) > tol) report.constant_restrictions_match = false;
    std::vector<Lottery> xs{constant_equivalent(env_i, model_i, constants[a]).witness};
    for (std::size_t r = 0; r < samples.random_lotteries; ++r) xs.push_back(rng.lottery(n));
    for (const auto& x : xs) {
      const bool antecedent = ui.of(x) >= value_i[a] - tol;
      const double margin = uj.of(x) - value_j[a];
      record(report.taste, antecedent, margin >= -tol, margin,
             "constant menu #" + std::to_string(a) + " with x = " + describe_lottery(x));
    }
  }

  // (ii) over sampled (menu, tau) pairs; x_A(tau) mixes the i-equivalents of A^q.
  std::vector<std::vector<double>> ii(samples.menus.size()), jj(samples.menus.size());
  std::vector<std::vector<Lottery>> mixtures(samples.menus.size());
  parallel_for(samples.menus.size(), [&](std::size_t m) {
    const Menu& menu = samples.menus[m];
    const double u_i = persuasion::menu_value(env_i, model_i, menu, options);
    const double u_j = persuasion::menu_value(env_j, model_j, menu, options);
    for (const auto& tau : samples.taus) {
      std::vector<Lottery> parts;
      for (const auto& q : tau.posteriors()) {
        parts.push_back(constant_equivalent(env_i, model_i, induce_constant_menu(menu, q)).witness);
      }
      mixtures[m].push_back(mix_lotteries(parts, tau.weights()));
      ii[m].push_back(u_i);
      jj[m].push_back(u_j);
    }
  });
  for (std::size_t m = 0; m < samples.menus.size(); ++m) {
    for (std::size_t t = 0; t < samples.taus.size(); ++t) {
      const Lottery& x = mixtures[m][t];
      const bool antecedent = ui.of(x) >= ii[m][t] - tol;
      const double margin = uj.of(x) - jj[m][t];
      record(report.information, antecedent, margin >= -tol, margin,
             "menu #" + std::to_string(m) + " with signal #" + std::to_string(t));
    }
  }

  for (const auto& lambda : samples.lambdas) {
    report.taste_cost_i.push_back(ei.taste_cost(lambda).value);
    report.taste_cost_j.push_back(ej.taste_cost(lambda).value);
    if (report.taste_cost_j.back() < report.taste_cost_i.back() - tol) report.taste_cost_dominance = false;
  }
  for (const auto& tau : samples.taus) {
    report.posterior_cost_i.push_back(ei.posterior_cost(tau).value);
    report.posterior_cost_j.push_back(ej.posterior_cost(tau).value);
    if (report.posterior_cost_j.back() < report.posterior_cost_i.back() - tol) report.posterior_cost_dominance = false;
  }

  // Elicited cost dominance failing means some family menu already breaks the
  // implication; the implication passing alongside it would be inconsistent.
  if (report.same_principal && !report.taste_cost_dominance && report.taste.holds) {
    report.defects.push_back("taste implication holds although elicited taste costs are not dominated");
  }
  return report;
}

}  // namespace persuasion
