#include "persuasion/costs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "persuasion/lp.hpp"
#include "persuasion/random.hpp"

namespace persuasion {

std::string_view to_string(Psi psi) { return psi == Psi::kEntropy ? "entropy" : "quadratic"; }

double psi_value(Psi psi, const Belief& q) {
  double total = 0.0;
  for (std::size_t s = 0; s < q.size(); ++s) {
    const double x = q[s];
    if (psi == Psi::kEntropy) {
      if (x > 0.0) total += x * std::log(x);
    } else {
      total += x * x;
    }
  }
  return total;
}

std::vector<double> psi_gradient(Psi psi, const Belief& q) {
  std::vector<double> g(q.size());
  for (std::size_t s = 0; s < q.size(); ++s) {
    g[s] = psi == Psi::kEntropy ? std::log(q[s]) + 1.0 : 2.0 * q[s];
  }
  return g;
}

// ------------------------------------------------------ PosteriorCostSpec

PosteriorCostSpec PosteriorCostSpec::full_constraint() { return PosteriorCostSpec{}; }

PosteriorCostSpec PosteriorCostSpec::finite_constraint(std::vector<SignalStructure> members) {
  if (members.empty()) throw Error(ErrorCode::kInvalidCostSpec, "constraint set is empty");
  PosteriorCostSpec spec;
  spec.members_ = std::move(members);
  return spec;
}

PosteriorCostSpec PosteriorCostSpec::separable(Psi psi, double kappa, std::size_t states) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::kInvalidCostSpec, "posterior cost kappa must be finite and nonnegative");
  }
  Rng rng(0x5eedc0517ULL + states);
  for (int trial = 0; trial < 200; ++trial) {
    const Belief a = rng.belief(states);
    const Belief b = rng.belief(states);
    const double beta = rng.uniform();
    std::vector<double> mid(states);
    for (std::size_t s = 0; s < states; ++s) mid[s] = beta * a[s] + (1.0 - beta) * b[s];
    double total = 0.0;
    for (double x : mid) total += x;
    for (double& x : mid) x /= total;
    const double lhs = psi_value(psi, Belief(std::move(mid)));
    const double rhs = beta * psi_value(psi, a) + (1.0 - beta) * psi_value(psi, b);
    if (lhs > rhs + 1e-12) throw Error(ErrorCode::kInvalidCostSpec, "psi is not convex on sampled triple");
  }
  PosteriorCostSpec spec;
  spec.kind_ = Kind::kSeparable;
  spec.psi_ = psi;
  spec.kappa_ = kappa;
  return spec;
}

std::string PosteriorCostSpec::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::kSeparable) {
    os << "separable(" << to_string(psi_) << ", kappa=" << kappa_ << ")";
  } else if (members_.empty()) {
    os << "constraint(full)";
  } else {
    os << "constraint(" << members_.size() << " structures)";
  }
  return os.str();
}

bool in_signal_hull(const SignalStructure& tau, const std::vector<SignalStructure>& members) {
  std::vector<Belief> atoms;
  auto index_of = [&atoms](const Belief& q) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].approx_equal(q, 1e-9)) return i;
    }
    atoms.push_back(q);
    return atoms.size() - 1;
  };
  std::vector<std::vector<std::pair<std::size_t, double>>> member_atoms;
  for (const auto& m : members) {
    std::vector<std::pair<std::size_t, double>> entries;
    for (std::size_t i = 0; i < m.size(); ++i) entries.emplace_back(index_of(m.posteriors()[i]), m.weights()[i]);
    member_atoms.push_back(std::move(entries));
  }
  const std::size_t known = atoms.size();
  std::vector<double> target(known, 0.0);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const std::size_t a = index_of(tau.posteriors()[i]);
    if (a >= known) {
      if (tau.weights()[i] > 1e-8) return false;
      continue;
    }
    target[a] += tau.weights()[i];
  }
  lp::Problem program;
  program.num_vars = members.size();
  program.objective.assign(members.size(), 0.0);
  for (std::size_t a = 0; a < known; ++a) {
    std::vector<double> row(members.size(), 0.0);
    for (std::size_t j = 0; j < members.size(); ++j) {
      for (const auto& [idx, w] : member_atoms[j]) {
        if (idx == a) row[j] += w;
      }
    }
    program.rows.push_back(std::move(row));
    program.rhs.push_back(target[a]);
  }
  program.rows.emplace_back(members.size(), 1.0);
  program.rhs.push_back(1.0);
  lp::Options options;
  options.feasibility_tol = 1e-8;
  return lp::feasible(program, options);
}

double posterior_cost(const PosteriorCostSpec& spec, const SignalStructure& tau, const Belief& prior) {
  if (!tau.is_bayes_plausible(prior, 1e-8)) {
    throw Error(ErrorCode::kNotBayesPlausible, "signal structure barycenter differs from the prior");
  }
  if (spec.kind() == PosteriorCostSpec::Kind::kConstraint) {
    if (spec.is_full()) return 0.0;
    return in_signal_hull(tau, spec.members()) ? 0.0 : kInfinity;
  }
  double expected = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) expected += tau.weights()[i] * psi_value(spec.psi(), tau.posteriors()[i]);
  return std::max(0.0, spec.kappa() * (expected - psi_value(spec.psi(), prior)));
}

// ---------------------------------------------------------- TasteCostSpec

TasteCostSpec::TasteCostSpec(Kind kind, std::vector<Utility> grid, TasteDistribution reference)
    : kind_(kind), grid_(std::move(grid)), reference_(std::move(reference)) {
  if (grid_.empty()) throw Error(ErrorCode::kInvalidCostSpec, "taste grid is empty");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    for (std::size_t j = i + 1; j < grid_.size(); ++j) {
      if (grid_[i].approx_equal(grid_[j])) throw Error(ErrorCode::kInvalidCostSpec, "taste grid has duplicates");
    }
  }
  reference_weights_ = reference_.weights_on(grid_);
  penalty_.assign(grid_.size(), 0.0);
}

TasteCostSpec TasteCostSpec::fixed(std::vector<Utility> grid, TasteDistribution reference) {
  return TasteCostSpec(Kind::kFixed, std::move(grid), std::move(reference));
}

TasteCostSpec TasteCostSpec::linear(std::vector<Utility> grid, TasteDistribution reference,
                                    std::vector<double> penalty) {
  TasteCostSpec spec(Kind::kLinear, std::move(grid), std::move(reference));
  if (penalty.size() != spec.grid_.size()) throw Error(ErrorCode::kInvalidCostSpec, "penalty vs taste grid size");
  for (std::size_t i = 0; i < penalty.size(); ++i) {
    if (!(penalty[i] >= 0.0)) throw Error(ErrorCode::kInvalidCostSpec, "taste penalty must be nonnegative");
    if (spec.reference_weights_[i] > 0.0 && penalty[i] != 0.0) {
      throw Error(ErrorCode::kInvalidCostSpec, "taste penalty must vanish on the reference support");
    }
  }
  spec.penalty_ = std::move(penalty);
  return spec;
}

TasteCostSpec TasteCostSpec::divergence(std::vector<Utility> grid, TasteDistribution reference, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorCode::kInvalidCostSpec, "divergence kappa must be finite and positive");
  }
  TasteCostSpec spec(Kind::kDivergence, std::move(grid), std::move(reference));
  spec.kappa_ = kappa;
  return spec;
}

TasteCostSpec TasteCostSpec::scaled(double factor) const {
  TasteCostSpec out = *this;
  out.kappa_ *= factor;
  for (double& d : out.penalty_) d *= factor;
  return out;
}

std::string TasteCostSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::kFixed: os << "fixed"; break;
    case Kind::kLinear: os << "linear"; break;
    case Kind::kDivergence: os << "divergence(kappa=" << kappa_ << ")"; break;
  }
  return os.str();
}

double taste_cost(const TasteCostSpec& spec, const TasteDistribution& lambda) {
  const auto w = lambda.weights_on(spec.grid());
  const auto& ref = spec.reference_weights();
  switch (spec.kind()) {
    case TasteCostSpec::Kind::kFixed:
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::abs(w[i] - ref[i]) > 1e-12) return kInfinity;
      }
      return 0.0;
    case TasteCostSpec::Kind::kLinear: {
      double total = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) total += w[i] * spec.penalty()[i];
      return total;
    }
    case TasteCostSpec::Kind::kDivergence: {
      double total = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] <= 0.0) continue;
        if (ref[i] <= 0.0) return kInfinity;
        total += w[i] * std::log(w[i] / ref[i]);
      }
      return std::max(0.0, spec.kappa() * total);
    }
  }
  return kInfinity;
}

TasteStage taste_stage_from_phi(const TasteCostSpec& spec, const std::vector<double>& phi) {
  const auto& ref = spec.reference_weights();
  const std::size_t m = ref.size();
  if (phi.size() != m) throw Error(ErrorCode::kDimensionMismatch, "phi vs taste grid size");
  TasteStage out{0.0, std::vector<double>(m, 0.0)};
  switch (spec.kind()) {
    case TasteCostSpec::Kind::kFixed:
      for (std::size_t i = 0; i < m; ++i) {
        if (ref[i] > 0.0) out.value += ref[i] * phi[i];
      }
      out.weights = ref;
      break;
    case TasteCostSpec::Kind::kLinear: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < m; ++i) {
        if (phi[i] - spec.penalty()[i] > phi[best] - spec.penalty()[best]) best = i;
      }
      out.value = phi[best] - spec.penalty()[best];
      out.weights[best] = 1.0;
      break;
    }
    case TasteCostSpec::Kind::kDivergence: {
      const double kappa = spec.kappa();
      double top = -kInfinity;
      for (std::size_t i = 0; i < m; ++i) {
        if (ref[i] > 0.0) top = std::max(top, phi[i]);
      }
      double total = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (ref[i] <= 0.0) continue;
        out.weights[i] = ref[i] * std::exp((phi[i] - top) / kappa);
        total += out.weights[i];
      }
      for (double& w : out.weights) w /= total;
      out.value = top + kappa * std::log(total);
      break;
    }
  }
  return out;
}

InnerStage inner_taste_stage(const Menu& menu, const Utility& principal, const Belief& belief,
                             const TasteCostSpec& spec, double tie_tol) {
  std::vector<double> phi(spec.grid().size(), 0.0);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    // Off-reference tastes never matter for the fixed and divergence kinds.
    if (spec.kind() != TasteCostSpec::Kind::kLinear && spec.reference_weights()[i] <= 0.0) continue;
    phi[i] = strotz_value(menu, principal, spec.grid()[i], belief, tie_tol);
  }
  auto stage = taste_stage_from_phi(spec, phi);
  return {stage.value, TasteDistribution::from_grid(spec.grid(), stage.weights)};
}

// ------------------------------------------------------------ Joint costs

SignalStructure posterior_marginal(const JointDistribution& pi) {
  std::vector<Belief> post;
  std::vector<double> w;
  for (const auto& slice : pi.slices()) {
    post.push_back(slice.belief);
    w.push_back(slice.weight);
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return SignalStructure(std::move(post), std::move(w));
}

double joint_cost(const JointCostSpec& spec, const JointDistribution& pi, const Belief& prior) {
  if (!pi.is_bayes_plausible(prior, 1e-8)) {
    throw Error(ErrorCode::kNotBayesPlausible, "joint distribution barycenter differs from the prior");
  }
  double total = posterior_cost(spec.posterior, posterior_marginal(pi), prior);
  if (std::isinf(total)) return total;
  for (const auto& slice : pi.slices()) {
    const double c = taste_cost(spec.taste, slice.conditional);
    if (std::isinf(c)) return kInfinity;
    total += slice.weight * c;
  }
  return total;
}

double divergence_joint_cost(const DivergenceJointSpec& spec, const JointDistribution& pi) {
  struct Cell {
    const Belief* belief;
    const Utility* taste;
    double mass;
    double ref;
  };
  std::vector<Cell> cells;
  auto cell_of = [&cells](const Belief& b, const Utility& v) -> Cell& {
    for (auto& c : cells) {
      if (c.belief->approx_equal(b, 1e-12) && c.taste->approx_equal(v)) return c;
    }
    cells.push_back({&b, &v, 0.0, 0.0});
    return cells.back();
  };
  for (const auto& a : spec.reference.atoms()) cell_of(a.belief, a.taste).ref += a.weight;
  for (const auto& a : pi.atoms()) {
    if (a.weight > 0.0) cell_of(a.belief, a.taste).mass += a.weight;
  }
  double total = 0.0;
  for (const auto& c : cells) {
    if (c.mass <= 0.0) continue;
    if (c.ref <= 0.0) return kInfinity;
    total += c.mass * std::log(c.mass / c.ref);
  }
  return std::max(0.0, spec.kappa * total);
}

}  // namespace persuasion
