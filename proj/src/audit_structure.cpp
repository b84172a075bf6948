#include <algorithm>
#include <cmath>
#include <sstream>

#include "audit_internal.hpp"
#include "persuasion/concavify.hpp"
#include "persuasion/elicitation.hpp"

namespace persuasion::audit_detail {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(9);
  os << x;
  return os.str();
}

// Menus whose values make up gain_M(tau) = sum_i w_i U(M^{q_i}) - U(M).
struct GainTerms {
  std::vector<std::pair<std::size_t, double>> terms;
};

GainTerms add_gain(WitnessBuilder& w, const Menu& menu, const SignalStructure& tau, double sign) {
  GainTerms out;
  out.terms.emplace_back(w.add(menu), -sign);
  for (std::size_t i = 0; i < tau.size(); ++i) {
    out.terms.emplace_back(w.add(induce_constant_menu(menu, tau.posteriors()[i])), sign * tau.weights()[i]);
  }
  return out;
}

std::vector<std::pair<std::size_t, double>> concat(GainTerms a, const GainTerms& b) {
  a.terms.insert(a.terms.end(), b.terms.begin(), b.terms.end());
  return a.terms;
}

double gain(const Context& ctx, const Menu& menu, const SignalStructure& tau, const std::vector<Belief>& extras) {
  return tau_mixture_equivalent(ctx.env, ctx.model, menu, tau) - ctx.value(menu, extras);
}

}  // namespace

// Axiom 8. tau is the solver's optimizer for A; (i) gain_A(tau) >= gain_B(tau)
// on sampled B, where B is solved with tau's posteriors on its grid so that
// tau is feasible for B as well; (ii) singleton gains agree.
AxiomResult audit_exposure(const Context& ctx) {
  const std::size_t k = ctx.states(), n = ctx.outcomes();
  const double tol = ctx.spec.tol;
  const std::size_t per_menu = 10;
  const std::size_t menus = std::max<std::size_t>(1, ctx.spec.count / per_menu);
  auto result = run_tuples(ctx, "8", menus, [&](std::size_t i) {
    Rng rng = ctx.rng_for("8", i);
    const Menu a = rng.menu(k, n, ctx.spec.max_acts);
    const SignalStructure tau = solve_model(ctx.env, ctx.model, a, ctx.spec.solve).tau_star.pruned();
    const std::vector<Belief> extras = tau.posteriors();
    const double gain_a = gain(ctx, a, tau, extras);
    TupleOutcome out;
    out.antecedent = true;
    for (std::size_t j = 0; j < per_menu && !out.violation; ++j) {
      const Menu b = rng.menu(k, n, ctx.spec.max_acts);
      if (gain(ctx, b, tau, extras) - gain_a > tol) {
        WitnessBuilder w;
        const auto ga = add_gain(w, a, tau, -1.0);
        const auto gb = add_gain(w, b, tau, 1.0);
        w.strict(concat(gb, ga));
        out.violation = w.finish(ctx, "(i) fails: gain of B under A's optimizer exceeds A's", extras);
      }
    }
    for (std::size_t j = 0; j < 2 && !out.violation; ++j) {
      const Menu c = Menu::singleton(rng.act(k, n)), d = Menu::singleton(rng.act(k, n));
      const double diff = gain(ctx, c, tau, extras) - gain(ctx, d, tau, extras);
      if (std::abs(diff) > tol) {
        const double s = diff > 0.0 ? 1.0 : -1.0;
        WitnessBuilder w;
        const auto gc = add_gain(w, c, tau, s);
        const auto gd = add_gain(w, d, tau, -s);
        w.strict(concat(gc, gd));
        out.violation = w.finish(ctx, "(ii) fails: singleton gains differ", extras);
      }
    }
    return out;
  });
  result.samples = menus * per_menu;
  result.note = std::to_string(menus) + " menus A with their optimizers, " + std::to_string(per_menu) +
                " menus B and 2 singleton pairs each";
  return result;
}

// Axioms 8' and 8'': some candidate tau gives equal gains on every sampled
// menu. Candidates are the optimizers of sampled menus plus delta at the prior
// (8'), or point masses at the prior and at the optimizers' posteriors (8'').
AxiomResult audit_neutral_exposure(const Context& ctx, bool degenerate_only) {
  const std::string id = degenerate_only ? "8''" : "8'";
  const std::size_t k = ctx.states(), n = ctx.outcomes();
  const double tol = ctx.spec.tol;
  Rng rng = ctx.rng_for(id, 0);
  std::vector<Menu> menus;
  for (std::size_t i = 0; i < std::max<std::size_t>(2, ctx.spec.count / 10); ++i) menus.push_back(rng.menu(k, n, ctx.spec.max_acts));

  std::vector<SignalStructure> candidates{SignalStructure::uninformative(ctx.env.prior)};
  for (std::size_t i = 0; i < std::min<std::size_t>(menus.size(), 5); ++i) {
    const auto tau = solve_model(ctx.env, ctx.model, menus[i], ctx.spec.solve).tau_star.pruned();
    if (degenerate_only) {
      for (const auto& q : tau.posteriors()) candidates.emplace_back(std::vector<Belief>{q}, std::vector<double>{1.0});
    } else {
      candidates.push_back(tau);
    }
  }

  AxiomResult result;
  result.id = id;
  result.name = axiom_name(id);
  result.samples = menus.size() * candidates.size();
  WitnessBuilder w;
  std::vector<Belief> extras;
  for (const auto& tau : candidates) {
    extras.insert(extras.end(), tau.posteriors().begin(), tau.posteriors().end());
  }
  for (const auto& tau : candidates) {
    std::vector<double> gains;
    for (const auto& m : menus) gains.push_back(gain(ctx, m, tau, extras));
    const auto [lo, hi] = std::minmax_element(gains.begin(), gains.end());
    if (*hi - *lo <= tol) {
      ++result.antecedent_true;
      result.note = "neutral candidate found, gain spread " + fmt(*hi - *lo);
      return result;
    }
    const auto ihi = add_gain(w, menus[static_cast<std::size_t>(hi - gains.begin())], tau, 1.0);
    const auto ilo = add_gain(w, menus[static_cast<std::size_t>(lo - gains.begin())], tau, -1.0);
    w.strict(concat(ihi, ilo));
  }
  result.status = AxiomStatus::kViolated;
  result.witness = w.finish(ctx, "every candidate has two menus with different gains", extras);
  result.note = std::to_string(candidates.size()) + " candidates rejected";
  return result;
}

namespace {

// Zero-crossing search shared by Axioms 9 and 10. With B = B0 1/2 {h} for a
// constant lottery h, U(B) and U(B alpha C) move linearly in s = u(h) with
// slopes 1/2 and alpha/2, so both comparisons with A can be put on opposite
// sides of zero whenever their zeros differ.
TupleOutcome shift_search(const Context& ctx, const Menu& a, const Menu& b0, const Menu& c, double alpha,
                          const std::string& label) {
  const double tol = ctx.spec.tol;
  const std::size_t k = ctx.states();
  const Lottery h0 = Lottery::uniform(ctx.outcomes());
  const double s0 = ctx.env.principal.of(h0);
  const Menu b_at0 = mix_menus(b0, ctx.singleton(h0), 0.5);
  const double ua = ctx.value(a), uac = ctx.value(mix_menus(a, c, alpha));
  const double s1 = s0 + 2.0 * (ua - ctx.value(b_at0));
  const double sa = s0 + (2.0 / alpha) * (uac - ctx.value(mix_menus(b_at0, c, alpha)));
  TupleOutcome out;
  out.antecedent = true;
  if (std::abs(s1 - sa) <= 4.0 * tol / alpha) return out;
  const Lottery h = ctx.lottery_with_utility(0.5 * (s1 + sa));
  const Menu b = mix_menus(b0, Menu::of_lotteries({h}, k), 0.5);
  const Menu ac = mix_menus(a, c, alpha), bc = mix_menus(b, c, alpha);
  const double d1 = ua - ctx.value(b);
  const double da = uac - ctx.value(bc);
  if (!((d1 > tol && da < -tol) || (d1 < -tol && da > tol))) return out;
  WitnessBuilder w;
  const auto ia = w.add(a), ib = w.add(b), iac = w.add(ac), ibc = w.add(bc);
  const double s = d1 > 0.0 ? 1.0 : -1.0;
  w.strict({{ia, s}, {ib, -s}});
  w.strict({{ibc, s}, {iac, -s}});
  out.violation = w.finish(ctx, label + " reverses the ranking of A and B, alpha = " + fmt(alpha));
  return out;
}

}  // namespace

AxiomResult audit_constant_independence(const Context& ctx) {
  const std::size_t k = ctx.states(), n = ctx.outcomes();
  return run_tuples(ctx, "9", ctx.spec.count, [&](std::size_t i) {
    Rng rng = ctx.rng_for("9", i);
    const Menu a = rng.constant_menu(k, n, ctx.spec.max_acts);
    const Menu b0 = rng.constant_menu(k, n, ctx.spec.max_acts);
    const Menu c = rng.constant_menu(k, n, ctx.spec.max_acts);
    return shift_search(ctx, a, b0, c, rng.uniform(0.05, 0.95), "mixing with a constant menu");
  });
}

AxiomResult audit_singleton_independence(const Context& ctx) {
  const std::size_t k = ctx.states(), n = ctx.outcomes();
  return run_tuples(ctx, "10", ctx.spec.count, [&](std::size_t i) {
    Rng rng = ctx.rng_for("10", i);
    const Menu a = rng.menu(k, n, ctx.spec.max_acts);
    const Menu b0 = rng.menu(k, n, ctx.spec.max_acts);
    const Menu f = Menu::singleton(rng.act(k, n));
    return shift_search(ctx, a, b0, f, rng.uniform(0.05, 0.95), "mixing with a singleton");
  });
}

namespace {

// Lottery pair for a tuple: odd indices are random; even ones put a = b + eps
// theta with theta = v1 - v2 for two listed tastes, so v1 picks a and v2 picks b.
std::pair<Lottery, Lottery> taste_split_pair(const Context& ctx, Rng& rng, std::size_t index) {
  const std::size_t n = ctx.outcomes();
  const auto tastes = ctx.tastes();
  if (index % 2 == 1 || tastes.size() < 2) return {rng.lottery(n), rng.lottery(n)};
  const std::size_t i = rng.index(tastes.size());
  std::size_t j = rng.index(tastes.size() - 1);
  if (j >= i) ++j;
  const Lottery b = rng.lottery(n).mix(Lottery::uniform(n), 0.5);
  std::vector<double> theta(n);
  double eps = 0.1;
  for (std::size_t x = 0; x < n; ++x) {
    theta[x] = tastes[i][x] - tastes[j][x];
    if (theta[x] < 0.0) eps = std::min(eps, 0.5 * b.probs()[x] / -theta[x]);
  }
  std::vector<double> p(n);
  for (std::size_t x = 0; x < n; ++x) p[x] = b.probs()[x] + eps * theta[x];
  return {Lottery(std::move(p)), b};
}

}  // namespace

// Axiom 11: {a, b} ~ {a} or {a, b} ~ {b} for constant a, b.
AxiomResult audit_reducibility(const Context& ctx) {
  const std::size_t k = ctx.states();
  const double tol = ctx.spec.tol;
  return run_tuples(ctx, "11", ctx.spec.count, [&](std::size_t i) {
    Rng rng = ctx.rng_for("11", i);
    const auto [a, b] = taste_split_pair(ctx, rng, i);
    const Menu ma = ctx.singleton(a), mb = ctx.singleton(b), mab = Menu::of_lotteries({a, b}, k);
    const double ua = ctx.value(ma), ub = ctx.value(mb), uab = ctx.value(mab);
    TupleOutcome out;
    out.antecedent = true;
    if (std::abs(uab - ua) > tol && std::abs(uab - ub) > tol) {
      WitnessBuilder w;
      const auto ia = w.add(ma), ib = w.add(mb), iab = w.add(mab);
      const double sa = uab > ua ? 1.0 : -1.0, sb = uab > ub ? 1.0 : -1.0;
      w.strict({{iab, sa}, {ia, -sa}});
      w.strict({{iab, sb}, {ib, -sb}});
      out.violation = w.finish(ctx, "{a, b} is indifferent to neither singleton");
    }
    return out;
  });
}

// Axiom 11''': {a} >= {b} implies {a} ~ {a, b}.
AxiomResult audit_strategic_rationality(const Context& ctx) {
  const std::size_t k = ctx.states();
  const double tol = ctx.spec.tol;
  return run_tuples(ctx, "11'''", ctx.spec.count, [&](std::size_t i) {
    Rng rng = ctx.rng_for("11'''", i);
    auto [a, b] = taste_split_pair(ctx, rng, i);
    Menu ma = ctx.singleton(a), mb = ctx.singleton(b);
    double ua = ctx.value(ma), ub = ctx.value(mb);
    if (ua < ub) {
      std::swap(ma, mb);
      std::swap(ua, ub);
    }
    const Menu mab = Menu::of_lotteries({a, b}, k);
    const double uab = ctx.value(mab);
    TupleOutcome out;
    out.antecedent = true;
    if (std::abs(uab - ua) > tol) {
      WitnessBuilder w;
      const auto ia = w.add(ma), ib = w.add(mb), iab = w.add(mab);
      const double s = uab > ua ? 1.0 : -1.0;
      w.weak({{ia, 1.0}, {ib, -1.0}});
      w.strict({{iab, s}, {ia, -s}});
      out.violation = w.finish(ctx, "the better singleton is not indifferent to the pair");
    }
    return out;
  });
}

// Axioms 11' and 11'': the critical set built from the choices of every
// relevant taste is checked against sampled intermediate menus A* c B c co(A).
AxiomResult audit_finiteness(const Context& ctx, bool bounded) {
  const std::string id = bounded ? "11'" : "11''";
  const std::size_t k = ctx.states(), n = ctx.outcomes();
  const double tol = ctx.spec.tol;
  const auto tastes = ctx.tastes();
  const TasteDistribution lambda(tastes, std::vector<double>(tastes.size(), 1.0 / static_cast<double>(tastes.size())));
  const std::size_t bound = tastes.size() + 1;
  auto result = run_tuples(ctx, id, ctx.spec.count, [&](std::size_t i) {
    Rng rng = ctx.rng_for(id, i);
    const Menu a = rng.constant_menu(k, n, ctx.spec.max_acts + 2);
    const Menu critical = critical_set(a, lambda, ctx.env.principal, ctx.env.prior);
    TupleOutcome out;
    out.antecedent = true;
    if (bounded && critical.size() >= bound) {
      out.note = "critical set too large";
      WitnessBuilder w;
      w.add(critical);
      out.violation = w.finish(ctx, "critical set has " + std::to_string(critical.size()) + " acts, bound " +
                                        std::to_string(bound));
      return out;
    }
    std::vector<Act> acts = critical.acts();
    for (std::size_t j = 0; j < 2; ++j) {
      const auto w = rng.simplex(a.size());
      Act mix = a[0];
      double mass = w[0];
      for (std::size_t x = 1; x < a.size(); ++x) {
        mass += w[x];
        if (mass > 0.0) mix = a[x].mix(mix, w[x] / mass);
      }
      acts.push_back(mix);
    }
    const Menu b(std::move(acts));
    const double diff = ctx.value(b) - ctx.value(critical);
    if (std::abs(diff) > tol) {
      WitnessBuilder w;
      const auto ic = w.add(critical), ib = w.add(b);
      const double s = diff > 0.0 ? 1.0 : -1.0;
      w.strict({{ib, s}, {ic, -s}});
      out.violation = w.finish(ctx, "intermediate menu differs from the critical set");
    }
    return out;
  });
  result.note = "tastes considered: " + std::to_string(tastes.size());
  return result;
}

}  // namespace persuasion::audit_detail
