#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/models.hpp"

namespace persuasion {

// ------------------------------------------------------------- Dominance

struct TasteDominance {
  bool literal{false};
  bool functional{false};
  double functional_margin{0.0};  // min over tastes of phi_A(p0, v) - phi_B(p0, v)
};

/// Both readings of taste dominance for constant menus: the slice-wise
/// half-mixture inclusion, and per-taste Strotz values at the prior.
TasteDominance check_taste_dominance(const Menu& a, const Menu& b, const Utility& principal,
                                     const std::vector<Utility>& tastes, const Belief& prior,
                                     double tol = 1e-9);

struct InformationDominance {
  bool holds{false};
  std::vector<Belief> posteriors;
  std::vector<double> margins;  // U(A^p) - U(B^p)
};

/// Constant-menu values of A^p and B^p compared on the given posteriors.
InformationDominance check_information_dominance(const Menu& a, const Menu& b, const Environment& env,
                                                 const ModelSpec& model, const std::vector<Belief>& posteriors,
                                                 double tol = 1e-9);

/// Posterior lattice of the given resolution plus, with two states, the
/// indifference beliefs of both menus for every listed taste.
std::vector<Belief> comparison_posteriors(const Menu& a, const Menu& b, const std::vector<Utility>& tastes,
                                          const Belief& prior, std::size_t resolution);

/// phi_A(p, v) >= phi_B(p, v) on every listed (p, v).
bool check_joint_dominance(const Menu& a, const Menu& b, const Utility& principal, const std::vector<Utility>& tastes,
                           const std::vector<Belief>& posteriors, double tol = 1e-9);

// ----------------------------------------------------------------- Audit

enum class AxiomStatus { kHoldsOnSample, kViolated, kNotTestableExactly };
std::string_view to_string(AxiomStatus status);

/// sum_i coefficients[i] * U(menus[terms[i]]) + constant, required > margin
/// (strict) or >= -margin (weak).
struct WitnessInequality {
  std::vector<std::size_t> terms;
  std::vector<double> coefficients;
  double constant{0.0};
  bool strict{true};
};

struct AxiomWitness {
  std::vector<Menu> menus;
  std::vector<double> values;
  std::vector<WitnessInequality> claims;
  std::vector<Belief> extras;  // grid points the values were computed with
  std::string description;
};

struct AuditSpec {
  std::uint64_t seed{1};
  std::size_t count{200};
  std::size_t max_acts{3};
  double tol{1e-7};
  std::size_t continuity_points{101};
  double continuity_slack{1e-3};
  SolveOptions solve{};
};

struct AxiomResult {
  std::string id;
  std::string name;
  AxiomStatus status{AxiomStatus::kHoldsOnSample};
  std::size_t samples{0};
  std::size_t antecedent_true{0};
  std::optional<AxiomWitness> witness;
  std::string note;
  /// Secondary verdict where two readings exist (literal taste dominance,
  /// continuity surrogate).
  std::optional<bool> secondary;

  bool passes() const;
};

struct AuditReport {
  AuditSpec spec;
  std::string model;
  std::vector<AxiomResult> results;

  const AxiomResult* find(const std::string& id) const;
};

/// "1" .. "11", "5'", "8'", "8''", "11'", "11''", "11'''".
const std::vector<std::string>& supported_axioms();
std::string axiom_name(const std::string& id);

AxiomResult audit_axiom(const Environment& env, const ModelSpec& model, const std::string& id,
                        const AuditSpec& spec = {});
AuditReport audit_model(const Environment& env, const ModelSpec& model, const std::vector<std::string>& ids,
                        const AuditSpec& spec = {});

/// Recomputes U on the witness menus; true when every claim holds, with strict
/// claims exceeding `margin`.
bool revalidate(const Environment& env, const ModelSpec& model, const AxiomWitness& witness,
                const SolveOptions& options = {}, double margin = 1e-7);

// ---------------------------------------------------------- Critical sets

/// Union over the support of lambda of each taste's optimistic choice at the
/// prior.
Menu critical_set(const Menu& constant_menu, const TasteDistribution& lambda, const Utility& principal,
                  const Belief& prior, double tie_tol = kDefaultTieTol);

// ------------------------------------------------------ WARP and IND

struct ChoiceRule {
  double threshold{0.5};  // an act counts as chosen when its probability is at least this
  double margin{1e-6};     // required distance of every tested probability from the threshold
};

struct ChoiceWitness {
  Menu larger;               // {f, g, h} for WARP, A for IND
  Menu smaller;              // {f, g} for WARP, A alpha {h} for IND
  Act f;                     // chosen from `larger`
  Act g;                     // WARP: chosen from `smaller`; IND: the mixing act h
  std::vector<double> choice_larger;
  std::vector<double> choice_smaller;
  double alpha{0.0};
  std::string description;
};

struct WitnessSearch {
  std::optional<ChoiceWitness> witness;
  std::size_t tried{0};
  bool budget_exhausted{false};
};

/// Seeded search over constant menus {f, g, h} in which f is chosen from
/// {f, g, h}, g from {f, g} and f is not chosen from {f, g}.
WitnessSearch find_warp_violation(const Environment& env, const ModelSpec& model, std::uint64_t seed,
                                  std::size_t budget = 10000, ChoiceRule rule = {});

/// Seeded search over ({f, g}, h, alpha) in which f is chosen from {f, g} but
/// alpha f + (1 - alpha) h is not chosen from {f, g} alpha {h}.
WitnessSearch find_ind_violation(const Environment& env, const ModelSpec& model, std::uint64_t seed,
                                 std::size_t budget = 10000, ChoiceRule rule = {});

/// Recomputes the choice frequencies and rechecks the witness condition.
bool revalidate_warp(const Environment& env, const ModelSpec& model, const ChoiceWitness& witness, ChoiceRule rule = {});
bool revalidate_ind(const Environment& env, const ModelSpec& model, const ChoiceWitness& witness, ChoiceRule rule = {});

}  // namespace persuasion
