#pragma once

#include <cstddef>
#include <vector>

namespace persuasion::lp {

/// Dense equality-form program: maximize c.x subject to A x = b, x >= 0.
struct Problem {
  std::size_t num_vars{0};
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;  // each of length num_vars
  std::vector<double> rhs;
};

struct Result {
  double optimum{0.0};
  std::vector<double> solution;
  std::vector<double> duals;           // one per retained constraint row
  double slackness_residual{0.0};      // max_j |x_j * reduced_cost_j|
  double primal_residual{0.0};         // max_i |A_i x - b_i|
  std::size_t pivots{0};
};

struct Options {
  double pivot_tol = 1e-11;
  double feasibility_tol = 1e-9;
  std::size_t max_pivots = 100000;
};

/// Two-phase primal simplex with Bland's rule. Throws Error(kInfeasible) or
/// Error(kUnbounded).
Result solve(const Problem& problem, const Options& options = {});

/// True when {x >= 0 : A x = b} is nonempty.
bool feasible(const Problem& problem, const Options& options = {});

}  // namespace persuasion::lp
