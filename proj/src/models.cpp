#include "persuasion/models.hpp"

#include <algorithm>
#include <cmath>

namespace persuasion {

// -------------------------------------------------------------- ModelSpec

namespace {

TasteCostSpec fixed_at(const Utility& v) { return TasteCostSpec::fixed({v}, TasteDistribution::degenerate(v)); }

TasteCostSpec fixed_at(const TasteDistribution& lambda) { return TasteCostSpec::fixed(lambda.support(), lambda); }

ModelSpec make(ModelSpec::Kind kind, ModelSpec::Stage stage, PosteriorCostSpec posterior, TasteCostSpec taste) {
  ModelSpec m;
  m.kind = kind;
  m.stage = stage;
  m.posterior = std::move(posterior);
  m.taste = std::move(taste);
  return m;
}

void require_constraint(const PosteriorCostSpec& spec) {
  if (spec.kind() != PosteriorCostSpec::Kind::kConstraint) {
    throw Error(ErrorCode::kInvalidCostSpec, "bias models take a constraint set of signal structures");
  }
}

}  // namespace

ModelSpec ModelSpec::known_bias(const Utility& v, PosteriorCostSpec gamma) {
  require_constraint(gamma);
  return make(Kind::kKnownBias, Stage::kStrotz, std::move(gamma), fixed_at(v));
}

ModelSpec ModelSpec::uncertain_bias(const TasteDistribution& lambda, PosteriorCostSpec gamma) {
  require_constraint(gamma);
  return make(Kind::kUncertainBias, Stage::kRandomStrotz, std::move(gamma), fixed_at(lambda));
}

ModelSpec ModelSpec::costly(PosteriorCostSpec cost, const TasteDistribution& lambda) {
  return make(Kind::kCostly, Stage::kRandomStrotz, std::move(cost), fixed_at(lambda));
}

ModelSpec ModelSpec::sequential(PosteriorCostSpec cost, TasteCostSpec taste_cost) {
  return make(Kind::kSequential, Stage::kInner, std::move(cost), std::move(taste_cost));
}

ModelSpec ModelSpec::fixed_info(const SignalStructure& tau, TasteCostSpec taste_cost) {
  return make(Kind::kFixedInfo, Stage::kInner, PosteriorCostSpec::finite_constraint({tau}), std::move(taste_cost));
}

ModelSpec ModelSpec::no_info(const Belief& prior, TasteCostSpec taste_cost) {
  return make(Kind::kNoInfo, Stage::kInner, PosteriorCostSpec::finite_constraint({SignalStructure::uninformative(prior)}),
              std::move(taste_cost));
}

ModelSpec ModelSpec::costly_known_bias(PosteriorCostSpec cost, const Utility& v) {
  return make(Kind::kCostlyKnownBias, Stage::kStrotz, std::move(cost), fixed_at(v));
}

ModelSpec ModelSpec::costly_no_bias(PosteriorCostSpec cost, const Utility& principal) {
  return make(Kind::kCostlyNoBias, Stage::kStrotz, std::move(cost), fixed_at(principal));
}

ModelSpec ModelSpec::delegation(JointCostSpec cost) {
  return make(Kind::kDelegation, Stage::kInner, std::move(cost.posterior), std::move(cost.taste));
}

ModelSpec ModelSpec::delegation(DivergenceJointSpec cost) {
  if (!(cost.kappa > 0.0)) throw Error(ErrorCode::kInvalidCostSpec, "delegation kappa must be positive");
  ModelSpec m;
  m.kind = Kind::kDelegation;
  m.stage = Stage::kInner;
  m.joint = std::move(cost);
  return m;
}

const TasteCostSpec& ModelSpec::taste_cost() const {
  if (!taste) throw Error(ErrorCode::kInvalidCostSpec, "model has no taste-stage cost");
  return *taste;
}

std::vector<Utility> ModelSpec::relevant_tastes() const {
  std::vector<Utility> out;
  if (joint) {
    for (const auto& a : joint->reference.atoms()) {
      if (std::none_of(out.begin(), out.end(), [&](const Utility& v) { return v.approx_equal(a.taste); })) {
        out.push_back(a.taste);
      }
    }
    return out;
  }
  const auto& spec = taste_cost();
  if (spec.kind() == TasteCostSpec::Kind::kLinear) return spec.grid();
  for (std::size_t i = 0; i < spec.grid().size(); ++i) {
    if (spec.reference_weights()[i] > 0.0) out.push_back(spec.grid()[i]);
  }
  return out;
}

std::string_view to_string(ModelSpec::Kind kind) {
  switch (kind) {
    case ModelSpec::Kind::kKnownBias: return "known-bias";
    case ModelSpec::Kind::kUncertainBias: return "uncertain-bias";
    case ModelSpec::Kind::kCostly: return "costly";
    case ModelSpec::Kind::kSequential: return "sequential";
    case ModelSpec::Kind::kDelegation: return "delegation";
    case ModelSpec::Kind::kFixedInfo: return "fixed-info";
    case ModelSpec::Kind::kNoInfo: return "no-info";
    case ModelSpec::Kind::kCostlyKnownBias: return "costly-known-bias";
    case ModelSpec::Kind::kCostlyNoBias: return "costly-no-bias";
  }
  return "unknown";
}

std::string ModelSpec::kind_name() const { return std::string(to_string(kind)); }

// ------------------------------------------------------------------ Solve

double stage_value(const Environment& env, const ModelSpec& model, const Menu& menu, const Belief& belief) {
  const auto& spec = model.taste_cost();
  switch (model.stage) {
    case ModelSpec::Stage::kStrotz:
      return strotz_value(menu, env.principal, spec.reference().support().front(), belief, env.tie_tol);
    case ModelSpec::Stage::kRandomStrotz:
      return random_strotz_value(menu, env.principal, spec.reference(), belief, env.tie_tol);
    case ModelSpec::Stage::kInner:
      return inner_taste_stage(menu, env.principal, belief, spec, env.tie_tol).value;
  }
  return 0.0;
}

namespace {

TasteDistribution stage_lambda(const Environment& env, const ModelSpec& model, const Menu& menu,
                               const Belief& belief) {
  if (model.stage == ModelSpec::Stage::kInner) {
    return inner_taste_stage(menu, env.principal, belief, model.taste_cost(), env.tie_tol).lambda_star;
  }
  return model.taste_cost().reference();
}

void finish(const Environment& env, const ModelSpec& model, const Menu& menu, Solution& sol) {
  const StrotzEvaluator eval(menu, env.principal, env.tie_tol);
  sol.lambda_star.clear();
  for (const auto& q : sol.tau_star.posteriors()) {
    sol.lambda_star.push_back(stage_lambda(env, model, menu, q));
    for (const auto& v : sol.lambda_star.back().support()) {
      sol.diagnostics.tie_diameter = std::max(sol.diagnostics.tie_diameter, eval.pick(v, q).tie_diameter);
    }
  }
}

Solution solve_finite(const Environment& env, const ModelSpec& model, const Menu& menu) {
  const auto& members = model.posterior.members();
  std::size_t best = 0;
  double best_value = -kInfinity;
  for (std::size_t j = 0; j < members.size(); ++j) {
    double v = 0.0;
    for (std::size_t i = 0; i < members[j].size(); ++i) {
      v += members[j].weights()[i] * stage_value(env, model, menu, members[j].posteriors()[i]);
    }
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  Solution sol{best_value, members[best], {}, std::nullopt, {}};
  sol.diagnostics.feasibility = "bayes-plausible";
  return sol;
}

Solution solve_on_grid(const Environment& env, const ModelSpec& model, const Menu& menu,
                       const SolveOptions& options) {
  const std::size_t k = env.prior.size();
  const std::size_t resolution = options.resolution ? options.resolution : default_grid_resolution(k);
  std::vector<Belief> extras = options.extras;
  if (options.kink_enrichment && k == 2) {
    auto kinks = indifference_points(menu, model.relevant_tastes());
    extras.insert(extras.end(), kinks.begin(), kinks.end());
  }
  const PosteriorGrid grid(k, resolution, env.prior, std::move(extras));
  const bool separable = model.posterior.kind() == PosteriorCostSpec::Kind::kSeparable;
  const double kappa = separable ? model.posterior.kappa() : 0.0;
  auto shifted = [&](const Belief& q) {
    const double g = stage_value(env, model, menu, q);
    return separable ? g - kappa * psi_value(model.posterior.psi(), q) : g;
  };
  const auto profile = value_profile(shifted, grid);
  auto env_result = concave_envelope_at(profile, env.prior);
  const double shift = separable ? kappa * psi_value(model.posterior.psi(), env.prior) : 0.0;
  Solution sol{env_result.value + shift, env_result.tau_star, {}, std::nullopt, {}};
  sol.diagnostics.resolution = resolution;
  sol.diagnostics.grid_points = grid.size();
  sol.diagnostics.lp_residual = env_result.lp_residual;
  sol.diagnostics.feasibility = "bayes-plausible";
  return sol;
}

}  // namespace

Solution solve_model(const Environment& env, const ModelSpec& model, const Menu& menu, const SolveOptions& options) {
  if (model.is_divergence_delegation()) return solve_delegation(env, model, menu, options);
  if (menu.states() != env.prior.size() || menu.outcomes() != env.principal.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "menu dimensions differ from the problem");
  }
  const bool finite = model.posterior.kind() == PosteriorCostSpec::Kind::kConstraint && !model.posterior.is_full();
  Solution sol = finite ? solve_finite(env, model, menu) : solve_on_grid(env, model, menu, options);
  if (!finite) {
    if (options.refinement_check) {
      SolveOptions finer = options;
      finer.resolution = 2 * sol.diagnostics.resolution;
      finer.refinement_check = false;
      sol.diagnostics.refinement_delta = solve_on_grid(env, model, menu, finer).value - sol.value;
      sol.diagnostics.refinement_checked = true;
    }
  }
  finish(env, model, menu, sol);
  return sol;
}

double menu_value(const Environment& env, const ModelSpec& model, const Menu& menu, const SolveOptions& options) {
  SolveOptions plain = options;
  plain.refinement_check = false;
  return solve_model(env, model, menu, plain).value;
}

// ------------------------------------------------------------- Delegation

namespace {

Solution solve_divergence_delegation(const Environment& env, const DivergenceJointSpec& spec, const Menu& menu,
                                     const DelegationOptions& options) {
  std::vector<JointAtom> atoms;
  std::vector<double> ref;
  for (const auto& a : spec.reference.atoms()) {
    if (a.weight > 0.0) {
      atoms.push_back(a);
      ref.push_back(a.weight);
    }
  }
  const StrotzEvaluator eval(menu, env.principal, env.tie_tol);
  const std::size_t m = atoms.size();
  std::vector<double> phi(m), log_ref(m), log_pi(m), pi(m), next(m);
  for (std::size_t j = 0; j < m; ++j) {
    phi[j] = eval.value(atoms[j].taste, atoms[j].belief);
    log_ref[j] = std::log(ref[j]);
    log_pi[j] = log_ref[j];
    pi[j] = ref[j];
  }
  // Mirror ascent on the simplex with step 1/(2 kappa):
  // pi <- pi^(1/2) R^(1/2) exp(phi / (2 kappa)), renormalized.
  const double eta = 0.5 / spec.kappa;
  std::size_t iter = 0;
  double residual = kInfinity;
  while (residual >= options.residual) {
    if (++iter > options.max_iterations) {
      throw Error(ErrorCode::kNonConvergence, "delegation ascent did not converge");
    }
    double top = -kInfinity;
    for (std::size_t j = 0; j < m; ++j) {
      log_pi[j] = 0.5 * log_pi[j] + 0.5 * log_ref[j] + eta * phi[j];
      top = std::max(top, log_pi[j]);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) total += std::exp(log_pi[j] - top);
    const double log_total = top + std::log(total);
    residual = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      log_pi[j] -= log_total;
      next[j] = std::exp(log_pi[j]);
      residual = std::max(residual, std::abs(next[j] - pi[j]));
    }
    pi.swap(next);
  }
  double benefit = 0.0;
  double divergence = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    benefit += pi[j] * phi[j];
    if (pi[j] > 0.0) divergence += pi[j] * (log_pi[j] - log_ref[j]);
  }
  for (std::size_t j = 0; j < m; ++j) atoms[j].weight = pi[j];
  JointDistribution pi_star(std::move(atoms));
  Solution sol{benefit - spec.kappa * std::max(0.0, divergence), posterior_marginal(pi_star), {}, pi_star, {}};
  for (const auto& slice : pi_star.slices()) {
    sol.lambda_star.push_back(slice.conditional);
    for (const auto& v : slice.conditional.support()) {
      sol.diagnostics.tie_diameter = std::max(sol.diagnostics.tie_diameter, eval.pick(v, slice.belief).tie_diameter);
    }
  }
  sol.diagnostics.iterations = iter;
  sol.diagnostics.feasibility = "unconstrained";
  return sol;
}

}  // namespace

Solution solve_delegation(const Environment& env, const ModelSpec& model, const Menu& menu,
                          const SolveOptions& options, const DelegationOptions& delegation) {
  if (model.is_divergence_delegation()) return solve_divergence_delegation(env, *model.joint, menu, delegation);
  ModelSpec inner = model;
  inner.stage = ModelSpec::Stage::kInner;
  Solution sol = solve_model(env, inner, menu, options);
  std::vector<JointAtom> atoms;
  for (std::size_t i = 0; i < sol.tau_star.size(); ++i) {
    const auto& lambda = sol.lambda_star[i];
    for (std::size_t t = 0; t < lambda.size(); ++t) {
      atoms.push_back({sol.tau_star.posteriors()[i], lambda.support()[t], sol.tau_star.weights()[i] * lambda.weights()[t]});
    }
  }
  sol.pi_star = JointDistribution(std::move(atoms));
  return sol;
}

std::vector<double> within_menu_choice(const Environment& env, const Solution& solution, const Menu& menu) {
  const StrotzEvaluator eval(menu, env.principal, env.tie_tol);
  std::vector<double> freq(menu.size(), 0.0);
  for (std::size_t i = 0; i < solution.tau_star.size(); ++i) {
    const auto& q = solution.tau_star.posteriors()[i];
    const auto& lambda = solution.lambda_star[i];
    for (std::size_t t = 0; t < lambda.size(); ++t) {
      freq[eval.pick(lambda.support()[t], q).act] += solution.tau_star.weights()[i] * lambda.weights()[t];
    }
  }
  return freq;
}

}  // namespace persuasion
