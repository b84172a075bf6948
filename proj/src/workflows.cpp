#include "persuasion/workflows.hpp"

#include <algorithm>
#include <cmath>

namespace persuasion {

namespace {

// Two-point structure through the prior along the direction of a random belief.
SignalStructure sample_tau(Rng& rng, const Belief& prior) {
  const std::size_t k = prior.size();
  for (;;) {
    const Belief r = rng.belief(k);
    std::vector<double> d(k);
    double norm = 0.0;
    for (std::size_t s = 0; s < k; ++s) {
      d[s] = r[s] - prior[s];
      norm += d[s] * d[s];
    }
    if (norm < 1e-6) continue;
    // Largest steps t with prior + t d and prior - t d inside the simplex.
    double up = kInfinity, down = kInfinity;
    for (std::size_t s = 0; s < k; ++s) {
      if (d[s] < 0.0) up = std::min(up, prior[s] / -d[s]);
      if (d[s] > 0.0) down = std::min(down, prior[s] / d[s]);
    }
    const double a = rng.uniform(0.1, 0.9) * up, b = rng.uniform(0.1, 0.9) * down;
    std::vector<double> q1(k), q2(k);
    for (std::size_t s = 0; s < k; ++s) {
      q1[s] = prior[s] + a * d[s];
      q2[s] = prior[s] - b * d[s];
    }
    const double w = b / (a + b);
    return SignalStructure({Belief(std::move(q1)), Belief(std::move(q2))}, {w, 1.0 - w});
  }
}

TasteDistribution sample_lambda(Rng& rng, const TasteCostSpec& spec) {
  const auto& ref = spec.reference_weights();
  const auto s = rng.simplex(ref.size());
  const double m = rng.uniform(0.0, 0.7);
  std::vector<double> w(ref.size());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) total += w[i] = (1.0 - m) * ref[i] + m * s[i];
  for (auto& x : w) x /= total;
  return TasteDistribution::from_grid(spec.grid(), w);
}

// Splits the first posterior into two points on the line through the prior.
SignalStructure spread(const SignalStructure& tau, const Belief& prior) {
  const Belief& q = tau.posteriors()[0];
  const std::size_t k = q.size();
  double room = kInfinity;
  for (std::size_t s = 0; s < k; ++s) {
    const double d = q[s] - prior[s];
    if (d < 0.0) room = std::min(room, q[s] / -d);
  }
  const double out = std::min(0.5, 0.5 * room), in = 0.4;
  std::vector<double> lo(k), hi(k);
  for (std::size_t s = 0; s < k; ++s) {
    lo[s] = q[s] + out * (q[s] - prior[s]);
    hi[s] = q[s] - in * (q[s] - prior[s]);
  }
  const double a = in / (out + in);
  std::vector<Belief> posts{Belief(std::move(lo)), Belief(std::move(hi))};
  std::vector<double> weights{tau.weights()[0] * a, tau.weights()[0] * (1.0 - a)};
  for (std::size_t i = 1; i < tau.size(); ++i) {
    posts.push_back(tau.posteriors()[i]);
    weights.push_back(tau.weights()[i]);
  }
  return SignalStructure(std::move(posts), std::move(weights));
}

SignalStructure mix_structures(const SignalStructure& a, const SignalStructure& b, double alpha) {
  std::vector<Belief> posts;
  std::vector<double> weights;
  for (std::size_t i = 0; i < a.size(); ++i) {
    posts.push_back(a.posteriors()[i]);
    weights.push_back(alpha * a.weights()[i]);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    posts.push_back(b.posteriors()[i]);
    weights.push_back((1.0 - alpha) * b.weights()[i]);
  }
  return SignalStructure(std::move(posts), std::move(weights));
}

bool separable(const ModelSpec& model) { return model.posterior.kind() == PosteriorCostSpec::Kind::kSeparable; }
bool divergence(const ModelSpec& model) {
  return model.taste.has_value() && model.taste->kind() == TasteCostSpec::Kind::kDivergence;
}

// Random menus plus supporting menus for `taus` and conflict menus for
// `lambdas` where the model's cost kinds allow them.
MenuFamily witness_family(const Environment& env, const ModelSpec& model, std::uint64_t seed, std::size_t count,
                          std::size_t max_acts, const std::vector<SignalStructure>& taus,
                          const std::vector<TasteDistribution>& lambdas, double scale, std::size_t* supporting,
                          std::size_t* conflict) {
  const std::size_t k = env.prior.size(), n = env.principal.size();
  FamilyConfig config;
  config.count = count;
  config.max_acts = max_acts;
  MenuFamily family = random_family(seed, k, n, config, env.prior);
  config.constant = true;
  family.append(random_family(seed + 1, k, n, config, env.prior));
  *supporting = *conflict = 0;
  const auto tastes = model.relevant_tastes();
  if (separable(model)) {
    if (const auto d = common_direction(env.principal, tastes)) {
      for (const auto& tau : taus) {
        if (auto m = supporting_menu(env, tau, model.posterior.psi(), model.posterior.kappa(), *d, scale)) {
          family.add(std::move(*m), "supporting");
          ++*supporting;
        }
      }
    }
  }
  if (divergence(model)) {
    for (const auto& lambda : lambdas) {
      if (auto m = conflict_menu(env, lambda, model.taste->reference(), model.taste->kappa(), scale)) {
        family.add(std::move(*m), "conflict");
        ++*conflict;
      }
    }
  }
  return family;
}

std::optional<double> finite(double x) {
  if (std::isfinite(x)) return x;
  return std::nullopt;
}

}  // namespace

ElicitationReport run_elicitation(const Environment& env, const ModelSpec& model, const ElicitationSettings& settings,
                                  const SolveOptions& options) {
  ElicitationReport report;
  Rng rng(settings.seed);
  for (std::size_t i = 0; i < settings.tau_samples; ++i) report.taus.push_back(sample_tau(rng, env.prior));
  if (model.taste) {
    for (std::size_t i = 0; i < settings.lambda_samples; ++i) report.lambdas.push_back(sample_lambda(rng, *model.taste));
  }
  // The spreads used by the monotonicity check get witnesses of their own.
  std::vector<SignalStructure> targets = report.taus;
  for (const auto& tau : report.taus) targets.push_back(spread(tau, env.prior));
  MenuFamily family = witness_family(env, model, settings.seed + 1, settings.family_count, settings.max_acts, targets,
                                     report.lambdas, settings.witness_scale, &report.supporting, &report.conflict);
  report.family_size = family.size();
  SolveOptions solve = options;
  const auto extras = signal_extras(targets, env.prior);
  solve.extras.insert(solve.extras.end(), extras.begin(), extras.end());
  const Elicitor elicitor(env, model, family, solve);

  auto record = [&](const CostEstimate& e, double truth) {
    SampleEstimate s;
    s.estimate = e.value;
    s.truth = finite(truth);
    s.stratum = e.witness ? family.strata[*e.witness] : "none";
    s.minimal = !s.truth || e.value <= *s.truth;
    report.minimal = report.minimal && s.minimal;
    return s;
  };
  for (const auto& tau : report.taus) {
    report.posterior.push_back(record(elicitor.posterior_cost(tau), posterior_cost(model.posterior, tau, env.prior)));
  }
  for (const auto& lambda : report.lambdas) {
    report.taste.push_back(record(elicitor.taste_cost(lambda), taste_cost(*model.taste, lambda)));
  }

  report.grounded_posterior = elicitor.posterior_cost(SignalStructure::uninformative(env.prior)).value;
  if (model.taste) report.grounded_taste = elicitor.taste_cost(model.taste->reference()).value;
  for (std::size_t i = 0; i < report.taus.size(); ++i) {
    const auto& tau = report.taus[i];
    const auto& next = report.taus[(i + 1) % report.taus.size()];
    const double e = report.posterior[i].estimate;
    const double e_next = report.posterior[(i + 1) % report.taus.size()].estimate;
    report.monotonicity_violation =
        std::max(report.monotonicity_violation, e - elicitor.posterior_cost(spread(tau, env.prior)).value);
    const double alpha = 0.3;
    const double mixed = elicitor.posterior_cost(mix_structures(tau, next, alpha)).value;
    report.convexity_violation = std::max(report.convexity_violation, mixed - (alpha * e + (1.0 - alpha) * e_next));
  }

  const bool sequential = model.kind == ModelSpec::Kind::kSequential && model.taste.has_value();
  if (settings.round_trip && sequential && env.prior.size() == 2) {
    RoundTrip& rt = report.round_trip;
    rt.run = true;
    const auto lattice_taus = two_point_structures(env.prior, settings.lattice);
    const auto lattice_lambdas = taste_lattice(model.taste->grid(), settings.lattice);
    std::size_t sup = 0, con = 0;
    const MenuFamily rt_family = witness_family(env, model, settings.seed + 3, settings.family_count,
                                                settings.max_acts, lattice_taus, lattice_lambdas,
                                                settings.witness_scale, &sup, &con);
    const Elicitor rt_elicitor(env, model, rt_family, options);
    std::vector<double> taste_costs;
    for (const auto& lambda : lattice_lambdas) taste_costs.push_back(rt_elicitor.taste_cost(lambda).value);
    std::vector<Belief> posteriors;
    for (std::size_t j = 0; j <= settings.lattice; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(settings.lattice);
      posteriors.push_back(Belief({t, 1.0 - t}));
    }
    const ElicitedSequential rebuilt(
        env, [&](const std::vector<SignalStructure>& ts) { return rt_elicitor.posterior_costs(ts); }, posteriors,
        lattice_lambdas, taste_costs);
    const std::size_t k = env.prior.size(), n = env.principal.size();
    auto error_on = [&](std::uint64_t seed, std::size_t count, double* mean) {
      Rng menus(seed);
      double worst = 0.0, total = 0.0;
      for (std::size_t i = 0; i < count; ++i) {
        const Menu m = menus.menu(k, n, settings.max_acts);
        const double err = std::abs(menu_value(env, model, m, options) - rebuilt.value(m));
        worst = std::max(worst, err);
        total += err;
      }
      if (mean) *mean = count ? total / static_cast<double>(count) : 0.0;
      return worst;
    };
    rt.calibration_error = error_on(settings.seed + 1000, settings.calibration_menus, nullptr);
    rt.budget = std::max(settings.budget_floor, settings.budget_factor * rt.calibration_error);
    rt.heldout_max = error_on(settings.seed + 2000, settings.heldout_menus, &rt.heldout_mean);
    rt.within_budget = rt.heldout_max <= rt.budget;
  }
  return report;
}

Utility rotate_utility(const Utility& u, double angle) {
  const std::size_t n = u.size();
  // Orthonormal partner of u in the sum-zero plane by Gram-Schmidt on e_i - 1/n.
  std::vector<double> e;
  for (std::size_t i = 0; i < n && e.empty(); ++i) {
    std::vector<double> c(n, -1.0 / static_cast<double>(n));
    c[i] += 1.0;
    double dot = 0.0;
    for (std::size_t x = 0; x < n; ++x) dot += c[x] * u[x];
    double norm = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      c[x] -= dot * u[x];
      norm += c[x] * c[x];
    }
    if (norm > 1e-6) {
      for (auto& x : c) x /= std::sqrt(norm);
      e = std::move(c);
    }
  }
  if (e.empty()) throw Error(ErrorCode::kInvalidUtility, "no rotation plane for a two-outcome utility");
  std::vector<double> r(n);
  for (std::size_t x = 0; x < n; ++x) r[x] = std::cos(angle) * u[x] + std::sin(angle) * e[x];
  return normalize_utility(r);
}

ComparativeReport run_comparative_statics(const Environment& env, const ModelSpec& model,
                                          const ComparativeSettings& settings, const SolveOptions& options) {
  if (model.kind != ModelSpec::Kind::kSequential || !separable(model) || !model.taste) {
    throw Error(ErrorCode::kValidationError, "comparative statics need a sequential model with a separable posterior cost");
  }
  const std::size_t k = env.prior.size(), n = env.principal.size();
  Rng rng(settings.seed);
  ComparisonSamples samples;
  samples.seed = settings.seed;
  for (std::size_t i = 0; i < settings.constant_menus; ++i) samples.constant_menus.push_back(rng.constant_menu(k, n, settings.max_acts));
  for (std::size_t i = 0; i < settings.menus; ++i) samples.menus.push_back(rng.menu(k, n, settings.max_acts));
  for (std::size_t i = 0; i < settings.tau_samples; ++i) samples.taus.push_back(sample_tau(rng, env.prior));
  for (std::size_t i = 0; i < settings.lambda_samples; ++i) samples.lambdas.push_back(sample_lambda(rng, *model.taste));
  std::size_t sup = 0, con = 0;
  const MenuFamily family = witness_family(env, model, settings.seed + 1, settings.family_count, settings.max_acts,
                                           samples.taus, samples.lambdas, 0.95, &sup, &con);
  SolveOptions solve = options;
  const auto extras = signal_extras(samples.taus, env.prior);
  solve.extras.insert(solve.extras.end(), extras.begin(), extras.end());

  const auto& cp = model.posterior;
  const auto taste_doubled = ModelSpec::sequential(cp, model.taste->scaled(2.0));
  const auto posterior_doubled =
      ModelSpec::sequential(PosteriorCostSpec::separable(cp.psi(), 2.0 * cp.kappa(), k), *model.taste);
  ComparativeReport report;
  report.taste_doubled = compare_principals(env, model, env, taste_doubled, family, samples, solve, settings.tol);
  report.posterior_doubled = compare_principals(env, model, env, posterior_doubled, family, samples, solve, settings.tol);
  report.rotated_principal = rotate_utility(env.principal, settings.rotation);
  Environment rotated = env;
  rotated.principal = *report.rotated_principal;
  report.rotated = compare_principals(env, model, rotated, model, family, samples, solve, settings.tol);
  return report;
}

}  // namespace persuasion
