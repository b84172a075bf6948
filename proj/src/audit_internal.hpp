#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/audit.hpp"
#include "persuasion/random.hpp"

namespace persuasion::audit_detail {

/// Shared state for one axiom run.
struct Context {
  const Environment& env;
  const ModelSpec& model;
  const AuditSpec& spec;

  std::size_t states() const { return env.prior.size(); }
  std::size_t outcomes() const { return env.principal.size(); }

  double value(const Menu& menu, const std::vector<Belief>& extras = {}) const;
  Lottery best_lottery() const;
  Lottery worst_lottery() const;
  /// Lottery on the worst-best segment with the given commitment utility,
  /// clamped to the attainable range.
  Lottery lottery_with_utility(double level) const;
  Menu singleton(const Lottery& x) const { return Menu::of_lotteries({x}, states()); }
  /// Per-tuple generator seeded from the audit seed, the axiom and the index.
  Rng rng_for(const std::string& id, std::size_t index) const;
  std::vector<Utility> tastes() const;
};

/// Claim builder: menus are appended to the witness and referenced by index.
class WitnessBuilder {
 public:
  std::size_t add(const Menu& menu);
  /// sum coefficient * U(menu) + constant > margin.
  void strict(std::vector<std::pair<std::size_t, double>> terms, double constant = 0.0);
  /// Same expression >= -margin.
  void weak(std::vector<std::pair<std::size_t, double>> terms, double constant = 0.0);
  AxiomWitness finish(const Context& ctx, std::string description, std::vector<Belief> extras = {});

 private:
  AxiomWitness witness_;
};

/// Outcome of one sampled tuple.
struct TupleOutcome {
  bool antecedent{false};
  std::optional<AxiomWitness> violation;
  std::string note;
};

/// Evaluates `n` tuples (in parallel) and folds them in index order: the first
/// violation becomes the witness.
AxiomResult run_tuples(const Context& ctx, const std::string& id, std::size_t n,
                       const std::function<TupleOutcome(std::size_t)>& evaluate);

double tau_gain(const Context& ctx, const Menu& menu, const SignalStructure& tau, double menu_value);

AxiomResult audit_exposure(const Context& ctx);
AxiomResult audit_neutral_exposure(const Context& ctx, bool degenerate_only);
AxiomResult audit_constant_independence(const Context& ctx);
AxiomResult audit_singleton_independence(const Context& ctx);
AxiomResult audit_reducibility(const Context& ctx);
AxiomResult audit_strategic_rationality(const Context& ctx);
AxiomResult audit_finiteness(const Context& ctx, bool bounded);

}  // namespace persuasion::audit_detail
