#include "persuasion/elicitation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "persuasion/lp.hpp"
#include "persuasion/parallel.hpp"

namespace persuasion {

// ------------------------------------------------------------- MenuFamily

void MenuFamily::add(Menu menu, std::string stratum) {
  menus.push_back(std::move(menu));
  strata.push_back(std::move(stratum));
}

void MenuFamily::append(const MenuFamily& other) {
  menus.insert(menus.end(), other.menus.begin(), other.menus.end());
  strata.insert(strata.end(), other.strata.begin(), other.strata.end());
}

MenuFamily MenuFamily::constant_subfamily() const {
  MenuFamily out;
  out.seed = seed;
  for (std::size_t i = 0; i < menus.size(); ++i) {
    if (menus[i].is_constant()) out.add(menus[i], strata[i]);
  }
  return out;
}

MenuFamily random_family(std::uint64_t seed, std::size_t states, std::size_t outcomes, const FamilyConfig& config,
                         const Belief& prior) {
  Rng rng(seed);
  MenuFamily family;
  family.seed = seed;
  for (std::size_t i = 0; i < config.count; ++i) {
    family.add(config.constant ? rng.constant_menu(states, outcomes, config.max_acts)
                               : rng.menu(states, outcomes, config.max_acts),
               "random");
  }
  const std::size_t drawn = family.size();
  for (std::size_t i = 0; i < drawn; ++i) {
    const Menu menu = family.menus[i];
    if (config.singletons && menu.size() > 1) {
      for (const auto& f : menu.acts()) family.add(Menu::singleton(f), "singleton");
    }
    if (config.projections && !menu.is_constant()) family.add(induce_constant_menu(menu, prior), "projection");
  }
  return family;
}

// -------------------------------------------------------------- Witnesses

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool liked_by_all(const std::vector<double>& d, const Utility& principal, const std::vector<Utility>& tastes) {
  if (dot(principal.weights(), d) <= 1e-9) return false;
  return std::all_of(tastes.begin(), tastes.end(), [&](const Utility& v) { return dot(v.weights(), d) > 1e-9; });
}

// Moves past the shared base lottery along d stay inside the simplex for t in [lo, hi].
std::pair<double, double> segment_range(const std::vector<double>& base, const std::vector<double>& d) {
  double lo = -kInfinity;
  double hi = kInfinity;
  for (std::size_t x = 0; x < d.size(); ++x) {
    if (d[x] > 0.0) lo = std::max(lo, -base[x] / d[x]);
    if (d[x] < 0.0) hi = std::min(hi, -base[x] / d[x]);
  }
  return {lo, hi};
}

Lottery exact_lottery(std::vector<double> p) {
  for (double& x : p) x = std::max(0.0, x);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return Lottery(std::move(p));
}

Belief exact_belief(std::vector<double> p) {
  for (double& x : p) x = std::max(0.0, x);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return Belief(std::move(p));
}

}  // namespace

std::optional<std::vector<double>> common_direction(const Utility& principal, const std::vector<Utility>& tastes) {
  const std::size_t n = principal.size();
  std::vector<std::vector<double>> candidates;
  candidates.emplace_back(principal.weights().begin(), principal.weights().end());
  std::vector<double> sum(principal.weights().begin(), principal.weights().end());
  for (const auto& v : tastes) {
    for (std::size_t x = 0; x < n; ++x) sum[x] += v[x];
  }
  candidates.push_back(sum);
  for (const auto& v : tastes) candidates.emplace_back(v.weights().begin(), v.weights().end());
  for (const auto& d : candidates) {
    if (liked_by_all(d, principal, tastes)) return d;
  }
  return std::nullopt;
}

std::optional<Menu> supporting_menu(const Environment& env, const SignalStructure& tau, Psi psi, double kappa,
                                    const std::vector<double>& direction, double scale) {
  const std::size_t k = env.prior.size();
  const std::size_t n = env.principal.size();
  // targets[i][s]: value at vertex s of the scaled tangent of kappa * psi at posterior i.
  std::vector<std::vector<double>> targets;
  double top = -kInfinity;
  double bottom = kInfinity;
  for (const auto& q : tau.posteriors()) {
    for (std::size_t s = 0; s < k; ++s) {
      if (q[s] <= 0.0) return std::nullopt;
    }
    const auto grad = psi_gradient(psi, q);
    const double level = psi_value(psi, q) - dot(grad, q.probs());
    std::vector<double> row(k);
    for (std::size_t s = 0; s < k; ++s) {
      row[s] = scale * kappa * (level + grad[s]);
      top = std::max(top, row[s]);
      bottom = std::min(bottom, row[s]);
    }
    targets.push_back(std::move(row));
  }
  const std::vector<double> base(n, 1.0 / static_cast<double>(n));
  const auto [lo, hi] = segment_range(base, direction);
  const double ud = dot(env.principal.weights(), direction);
  const double room = 0.98 * (hi - lo) * ud;
  if (!(top - bottom <= room)) return std::nullopt;
  const double shift = 0.5 * (lo + hi) * ud - 0.5 * (top + bottom);
  std::vector<Act> acts;
  for (const auto& row : targets) {
    std::vector<Lottery> per_state;
    for (std::size_t s = 0; s < k; ++s) {
      const double t = (row[s] + shift) / ud;
      std::vector<double> p(n);
      for (std::size_t x = 0; x < n; ++x) p[x] = base[x] + t * direction[x];
      per_state.push_back(exact_lottery(std::move(p)));
    }
    acts.emplace_back(std::move(per_state));
  }
  return Menu(std::move(acts), "supporting");
}

namespace {

// Layouts a_v (one lottery per taste) in which every taste w strictly prefers
// a_w to every other a_v by at least `margin`.
class SeparatedLayouts {
 public:
  SeparatedLayouts(const Utility& principal, std::vector<Utility> tastes, double margin)
      : principal_(principal), tastes_(std::move(tastes)) {
    const std::size_t m = tastes_.size();
    const std::size_t n = principal_.size();
    problem_.num_vars = m * n + m * (m - 1);
    auto row = [&] { return std::vector<double>(problem_.num_vars, 0.0); };
    for (std::size_t v = 0; v < m; ++v) {
      auto total = row();
      for (std::size_t x = 0; x < n; ++x) total[v * n + x] = 1.0;
      problem_.rows.push_back(std::move(total));
      problem_.rhs.push_back(1.0);
    }
    std::size_t slack = m * n;
    for (std::size_t w = 0; w < m; ++w) {
      for (std::size_t v = 0; v < m; ++v) {
        if (v == w) continue;
        auto sep = row();
        for (std::size_t x = 0; x < n; ++x) {
          sep[w * n + x] += tastes_[w][x];
          sep[v * n + x] -= tastes_[w][x];
        }
        sep[slack++] = -1.0;
        problem_.rows.push_back(std::move(sep));
        problem_.rhs.push_back(margin);
      }
    }
  }

  /// Vertex maximizing sum_v g_v u(a_v); nothing when no layout exists.
  std::optional<std::vector<std::vector<double>>> best(const std::vector<double>& g) const {
    const std::size_t n = principal_.size();
    lp::Problem problem = problem_;
    problem.objective.assign(problem.num_vars, 0.0);
    for (std::size_t v = 0; v < tastes_.size(); ++v) {
      for (std::size_t x = 0; x < n; ++x) problem.objective[v * n + x] = g[v] * principal_[x];
    }
    lp::Result result;
    try {
      result = lp::solve(problem);
    } catch (const Error&) {
      return std::nullopt;
    }
    std::vector<std::vector<double>> out;
    for (std::size_t v = 0; v < tastes_.size(); ++v) {
      out.emplace_back(result.solution.begin() + static_cast<std::ptrdiff_t>(v * n),
                       result.solution.begin() + static_cast<std::ptrdiff_t>((v + 1) * n));
    }
    return out;
  }

  std::vector<double> payoffs(const std::vector<std::vector<double>>& layout) const {
    std::vector<double> phi;
    for (const auto& a : layout) phi.push_back(dot(principal_.weights(), a));
    return phi;
  }

 private:
  const Utility& principal_;
  std::vector<Utility> tastes_;
  lp::Problem problem_;
};

}  // namespace

std::optional<Menu> conflict_menu(const Environment& env, const TasteDistribution& lambda,
                                  const TasteDistribution& reference, double kappa, double scale) {
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda.weights()[i] > 0.0 && reference.weight_of(lambda.support()[i]) <= 0.0) return std::nullopt;
  }
  std::vector<Utility> tastes;
  std::vector<double> target, ref;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference.weights()[i] <= 0.0) continue;
    tastes.push_back(reference.support()[i]);
    target.push_back(lambda.weight_of(reference.support()[i]));
    ref.push_back(reference.weights()[i]);
  }
  if (tastes.size() < 2) return std::nullopt;
  const std::size_t m = tastes.size();
  // Gap between the lambda-average of principal payoffs and the Gibbs value
  // under the reference, with kappa inflated by 1/scale so the optimum stays
  // strictly below the true divergence.
  const double temp = kappa / scale;
  auto gap = [&](const std::vector<double>& phi) {
    double top = *std::max_element(phi.begin(), phi.end());
    double z = 0.0, avg = 0.0;
    for (std::size_t v = 0; v < m; ++v) {
      z += ref[v] * std::exp((phi[v] - top) / temp);
      avg += target[v] * phi[v];
    }
    return avg - top - temp * std::log(z);
  };
  const SeparatedLayouts layouts(env.principal, tastes, 1e-6);
  auto current = layouts.best(std::vector<double>(m, 0.0));
  if (!current) return std::nullopt;
  auto phi = layouts.payoffs(*current);
  for (int iter = 0; iter < 200; ++iter) {
    const double top = *std::max_element(phi.begin(), phi.end());
    std::vector<double> gibbs(m);
    double z = 0.0;
    for (std::size_t v = 0; v < m; ++v) z += gibbs[v] = ref[v] * std::exp((phi[v] - top) / temp);
    std::vector<double> g(m);
    for (std::size_t v = 0; v < m; ++v) g[v] = target[v] - gibbs[v] / z;
    const auto vertex = layouts.best(g);
    if (!vertex) break;
    const auto phi_s = layouts.payoffs(*vertex);
    double dual_gap = 0.0;
    for (std::size_t v = 0; v < m; ++v) dual_gap += g[v] * (phi_s[v] - phi[v]);
    if (dual_gap < 1e-12) break;
    // Golden-section line search; the gap is concave along the segment.
    auto along = [&](double t) {
      std::vector<double> p(m);
      for (std::size_t v = 0; v < m; ++v) p[v] = (1.0 - t) * phi[v] + t * phi_s[v];
      return gap(p);
    };
    double lo = 0.0, hi = 1.0;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int s = 0; s < 60; ++s) {
      const double a = hi - r * (hi - lo), b = lo + r * (hi - lo);
      if (along(a) < along(b)) lo = a; else hi = b;
    }
    const double t = 0.5 * (lo + hi);
    for (std::size_t v = 0; v < m; ++v) {
      for (std::size_t x = 0; x < (*current)[v].size(); ++x) {
        (*current)[v][x] = (1.0 - t) * (*current)[v][x] + t * (*vertex)[v][x];
      }
    }
    phi = layouts.payoffs(*current);
  }
  std::vector<Lottery> lotteries;
  for (auto& a : *current) lotteries.push_back(exact_lottery(std::move(a)));
  for (std::size_t w = 0; w < m; ++w) {
    for (std::size_t v = 0; v < m; ++v) {
      if (v != w && tastes[w].of(lotteries[v]) > tastes[w].of(lotteries[w]) - 1e-7) return std::nullopt;
    }
  }
  return Menu::of_lotteries(lotteries, env.prior.size(), "conflict");
}

std::vector<Belief> signal_extras(const std::vector<SignalStructure>& taus, const Belief& prior) {
  std::vector<Belief> out;
  for (const auto& tau : taus) {
    for (const auto& q : tau.posteriors()) {
      out.push_back(q);
      for (double t : {0.99, 0.97, 0.95}) {
        std::vector<double> p(q.size());
        for (std::size_t s = 0; s < p.size(); ++s) p[s] = prior[s] + t * (q[s] - prior[s]);
        out.push_back(exact_belief(std::move(p)));
      }
    }
  }
  return out;
}

// ------------------------------------------------------------ Equivalents

double constant_menu_value(const Environment& env, const ModelSpec& model, const Menu& constant_menu) {
  if (model.taste) return stage_value(env, model, constant_menu, env.prior);
  return persuasion::menu_value(env, model, constant_menu);
}

ConstantEquivalent constant_equivalent(const Environment& env, const ModelSpec& model, const Menu& menu,
                                       const SolveOptions& options) {
  const double value = persuasion::menu_value(env, model, menu, options);
  const auto& u = env.principal;
  std::vector<Lottery> induced;
  for (const auto& f : menu.acts()) induced.push_back(f.induced_lottery(env.prior));
  auto by_u = [&](const Lottery& a, const Lottery& b) { return u.of(a) < u.of(b); };
  Lottery best = *std::max_element(induced.begin(), induced.end(), by_u);
  Lottery worst = *std::min_element(induced.begin(), induced.end(), by_u);
  if (value > u.of(best) + 1e-12 || value < u.of(worst) - 1e-12) {
    // Information can lift U(A) above every commitment value in A; bracket by outcomes instead.
    const auto w = u.weights();
    const std::size_t hi = static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
    const std::size_t lo = static_cast<std::size_t>(std::min_element(w.begin(), w.end()) - w.begin());
    best = Lottery::degenerate(u.size(), hi);
    worst = Lottery::degenerate(u.size(), lo);
  }
  const double span = u.of(best) - u.of(worst);
  const double alpha = span > 0.0 ? std::clamp((value - u.of(worst)) / span, 0.0, 1.0) : 1.0;
  return {value, best.mix(worst, alpha)};
}

double tau_mixture_equivalent(const Environment& env, const ModelSpec& model, const Menu& menu,
                              const SignalStructure& tau) {
  double total = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    total += tau.weights()[i] * constant_menu_value(env, model, induce_constant_menu(menu, tau.posteriors()[i]));
  }
  return total;
}

// --------------------------------------------------------------- Elicitor

Elicitor::Elicitor(Environment env, ModelSpec model, MenuFamily family, SolveOptions options)
    : env_(std::move(env)), model_(std::move(model)), family_(std::move(family)) {
  values_.assign(family_.size(), 0.0);
  constant_.assign(family_.size(), false);
  options.refinement_check = false;
  parallel_for(family_.size(), [&](std::size_t i) { values_[i] = persuasion::menu_value(env_, model_, family_.menus[i], options); });
  for (std::size_t i = 0; i < family_.size(); ++i) constant_[i] = family_.menus[i].is_constant();
}

namespace {

CostEstimate reduce_gaps(const std::vector<double>& gaps) {
  CostEstimate out;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    if (gaps[i] > out.value) {
      out.value = gaps[i];
      out.witness = i;
    }
  }
  return out;
}

}  // namespace

CostEstimate Elicitor::posterior_cost(const SignalStructure& tau) const {
  std::vector<double> gaps(family_.size(), -kInfinity);
  parallel_for(family_.size(), [&](std::size_t i) {
    gaps[i] = tau_mixture_equivalent(env_, model_, family_.menus[i], tau) - values_[i];
  });
  return reduce_gaps(gaps);
}

std::vector<double> Elicitor::posterior_costs(const std::vector<SignalStructure>& taus) const {
  std::vector<Belief> missing;
  for (const auto& tau : taus) {
    for (const auto& q : tau.posteriors()) {
      auto same = [&](const Belief& b) { return b.approx_equal(q, 1e-12); };
      if (std::none_of(cached_posteriors_.begin(), cached_posteriors_.end(), same) &&
          std::none_of(missing.begin(), missing.end(), same)) {
        missing.push_back(q);
      }
    }
  }
  std::vector<std::vector<double>> columns(missing.size(), std::vector<double>(family_.size()));
  parallel_for(family_.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < missing.size(); ++j) {
      columns[j][i] = constant_menu_value(env_, model_, induce_constant_menu(family_.menus[i], missing[j]));
    }
  });
  for (std::size_t j = 0; j < missing.size(); ++j) {
    cached_posteriors_.push_back(missing[j]);
    cached_columns_.push_back(std::move(columns[j]));
  }
  auto column = [&](const Belief& q) -> const std::vector<double>& {
    for (std::size_t j = 0; j < cached_posteriors_.size(); ++j) {
      if (cached_posteriors_[j].approx_equal(q, 1e-12)) return cached_columns_[j];
    }
    throw Error(ErrorCode::kValidationError, "posterior missing from cache");
  };
  std::vector<double> out(taus.size(), 0.0);
  for (std::size_t t = 0; t < taus.size(); ++t) {
    std::vector<const std::vector<double>*> cols;
    for (const auto& q : taus[t].posteriors()) cols.push_back(&column(q));
    const auto& w = taus[t].weights();
    double best = 0.0;
    for (std::size_t i = 0; i < family_.size(); ++i) {
      double gap = -values_[i];
      for (std::size_t j = 0; j < cols.size(); ++j) gap += w[j] * (*cols[j])[i];
      best = std::max(best, gap);
    }
    out[t] = best;
  }
  return out;
}

CostEstimate Elicitor::taste_cost(const TasteDistribution& lambda) const {
  std::vector<double> gaps(family_.size(), -kInfinity);
  parallel_for(family_.size(), [&](std::size_t i) {
    if (!constant_[i]) return;
    gaps[i] = random_strotz_value(family_.menus[i], env_.principal, lambda, env_.prior, env_.tie_tol) - values_[i];
  });
  return reduce_gaps(gaps);
}

CostEstimate Elicitor::delegation_cost(const JointDistribution& pi) const {
  std::vector<double> gaps(family_.size(), -kInfinity);
  parallel_for(family_.size(), [&](std::size_t i) {
    gaps[i] = joint_benefit(family_.menus[i], env_.principal, pi, env_.tie_tol) - values_[i];
  });
  return reduce_gaps(gaps);
}

double elicit_posterior_cost(const Environment& env, const ModelSpec& model, const MenuFamily& family,
                             const SignalStructure& tau, const SolveOptions& options) {
  SolveOptions with_tau = options;
  const auto extras = signal_extras({tau}, env.prior);
  with_tau.extras.insert(with_tau.extras.end(), extras.begin(), extras.end());
  return Elicitor(env, model, family, with_tau).posterior_cost(tau).value;
}

double elicit_taste_cost(const Environment& env, const ModelSpec& model, const MenuFamily& constant_family,
                         const TasteDistribution& lambda, const SolveOptions& options) {
  return Elicitor(env, model, constant_family.constant_subfamily(), options).taste_cost(lambda).value;
}

double elicit_delegation_cost(const Environment& env, const ModelSpec& model, const MenuFamily& family,
                              const JointDistribution& pi, const SolveOptions& options) {
  SolveOptions with_pi = options;
  for (const auto& a : pi.atoms()) with_pi.extras.push_back(a.belief);
  return Elicitor(env, model, family, with_pi).delegation_cost(pi).value;
}

}  // namespace persuasion
