#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "persuasion/elicitation.hpp"

namespace persuasion {

// ------------------------------------------------------------- Elicitation

struct ElicitationSettings {
  std::uint64_t seed{1};
  std::size_t tau_samples{20};
  std::size_t lambda_samples{20};
  std::size_t family_count{500};  // random menus, and as many constant ones
  std::size_t max_acts{6};
  double witness_scale{0.95};
  double tol{1e-9};
  bool round_trip{true};
  std::size_t lattice{20};  // round-trip posterior and taste lattice
  std::size_t calibration_menus{50};
  std::size_t heldout_menus{50};
  double budget_factor{4.0};
  double budget_floor{1e-3};
};

struct SampleEstimate {
  double estimate{0.0};
  std::optional<double> truth;  // model's own cost when finite
  std::string stratum;          // family stratum of the maximizing menu
  bool minimal{true};           // estimate <= truth
};

struct RoundTrip {
  bool run{false};
  double calibration_error{0.0};
  double budget{0.0};
  double heldout_max{0.0};
  double heldout_mean{0.0};
  bool within_budget{false};
};

struct ElicitationReport {
  std::size_t family_size{0};
  std::size_t supporting{0};
  std::size_t conflict{0};
  std::vector<SignalStructure> taus;
  std::vector<TasteDistribution> lambdas;
  std::vector<SampleEstimate> posterior;
  std::vector<SampleEstimate> taste;
  bool minimal{true};
  double grounded_posterior{0.0};  // estimate at the uninformative structure
  double grounded_taste{0.0};      // estimate at the reference distribution
  double monotonicity_violation{0.0};
  double convexity_violation{0.0};
  RoundTrip round_trip;
};

/// Seeded sample structures around the prior and taste distributions around
/// the reference, a witness family for them, and the checks on the estimates.
ElicitationReport run_elicitation(const Environment& env, const ModelSpec& model, const ElicitationSettings& settings,
                                  const SolveOptions& options = {});

// ---------------------------------------------------- Comparative statics

struct ComparativeSettings {
  std::uint64_t seed{5};
  std::size_t constant_menus{100};
  std::size_t menus{100};
  std::size_t tau_samples{20};
  std::size_t lambda_samples{20};
  std::size_t family_count{200};
  std::size_t max_acts{6};
  double rotation{0.5};  // radians, within the sum-zero plane
  double tol{1e-9};
};

struct ComparativeReport {
  ComparisonReport taste_doubled;      // kappa_V doubled
  ComparisonReport posterior_doubled;  // kappa_P doubled
  ComparisonReport rotated;            // principal utility rotated
  std::optional<Utility> rotated_principal;
};

/// Compares a sequential model against copies with doubled taste cost,
/// doubled posterior cost and a rotated principal utility.
ComparativeReport run_comparative_statics(const Environment& env, const ModelSpec& model,
                                          const ComparativeSettings& settings, const SolveOptions& options = {});

/// u rotated by `angle` towards a unit vector orthogonal to u in the sum-zero plane.
Utility rotate_utility(const Utility& u, double angle);

}  // namespace persuasion
