#include "persuasion/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "persuasion/error.hpp"

namespace persuasion::lp {
namespace {

// Tableau over the original columns followed by one artificial column per row.
class Tableau {
 public:
  Tableau(const Problem& problem, const Options& options)
      : m_(problem.rows.size()), n_(problem.num_vars), opt_(options) {
    if (problem.rhs.size() != m_ || problem.objective.size() != n_) {
      throw Error(ErrorCode::kDimensionMismatch, "lp: objective/rhs size mismatch");
    }
    width_ = n_ + m_;
    cells_.assign(m_ * width_, 0.0);
    rhs_.resize(m_);
    sign_.resize(m_);
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (problem.rows[i].size() != n_) {
        throw Error(ErrorCode::kDimensionMismatch, "lp: constraint row " + std::to_string(i));
      }
      sign_[i] = problem.rhs[i] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign_[i] * problem.rows[i][j];
      at(i, n_ + i) = 1.0;
      rhs_[i] = sign_[i] * problem.rhs[i];
      basis_[i] = n_ + i;
    }
  }

  // Phase one: drive the artificial mass to zero. Returns the residual mass.
  double phase_one() {
    std::vector<double> cost(width_, 0.0);
    for (std::size_t j = n_; j < width_; ++j) cost[j] = -1.0;
    optimize(cost, /*allow_artificial=*/true);
    double mass = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_) mass += rhs_[i];
    }
    return mass;
  }

  // Pivots zero-level artificials out of the basis wherever a structural
  // column can replace them. Rows with no such column are linearly
  // dependent; their artificial stays basic at zero and never moves.
  void purge_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(at(i, j)) > opt_.pivot_tol) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  void phase_two(const std::vector<double>& objective) {
    std::vector<double> cost(width_, 0.0);
    std::copy(objective.begin(), objective.end(), cost.begin());
    final_cost_ = cost;
    optimize(cost, /*allow_artificial=*/false);
  }

  Result result(const Problem& problem) const {
    Result out;
    out.pivots = pivots_;
    out.solution.assign(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) out.solution[basis_[i]] = std::max(0.0, rhs_[i]);
    }
    out.duals.assign(m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double y = 0.0;
      for (std::size_t i = 0; i < m_; ++i) y += final_cost_[basis_[i]] * at(i, n_ + r);
      out.duals[r] = y * sign_[r];
    }
    for (std::size_t j = 0; j < n_; ++j) out.optimum += problem.objective[j] * out.solution[j];
    for (std::size_t j = 0; j < n_; ++j) {
      double reduced = problem.objective[j];
      for (std::size_t r = 0; r < m_; ++r) reduced -= out.duals[r] * problem.rows[r][j];
      out.slackness_residual = std::max(out.slackness_residual, std::abs(out.solution[j] * reduced));
    }
    for (std::size_t r = 0; r < m_; ++r) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n_; ++j) lhs += problem.rows[r][j] * out.solution[j];
      out.primal_residual = std::max(out.primal_residual, std::abs(lhs - problem.rhs[r]));
    }
    return out;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return cells_[i * width_ + j]; }
  double at(std::size_t i, std::size_t j) const { return cells_[i * width_ + j]; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = at(row, col);
    for (std::size_t j = 0; j < width_; ++j) at(row, j) /= p;
    rhs_[row] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
      rhs_[i] -= f * rhs_[row];
      if (std::abs(rhs_[i]) < 1e-15) rhs_[i] = 0.0;
    }
    basis_[row] = col;
    ++pivots_;
  }

  // Maximizes cost.x from the current basis using Bland's smallest-index rule.
  void optimize(const std::vector<double>& cost, bool allow_artificial) {
    const std::size_t limit = allow_artificial ? width_ : n_;
    while (true) {
      if (pivots_ >= opt_.max_pivots) {
        throw Error(ErrorCode::kNonConvergence, "lp: pivot limit reached");
      }
      std::size_t entering = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (is_basic(j)) continue;
        double reduced = cost[j];
        for (std::size_t i = 0; i < m_; ++i) reduced -= cost[basis_[i]] * at(i, j);
        if (reduced > opt_.pivot_tol) {
          entering = j;
          break;
        }
      }
      if (entering == limit) return;

      std::size_t leaving = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, entering);
        if (a <= opt_.pivot_tol) continue;
        const double ratio = rhs_[i] / a;
        if (ratio < best_ratio - 1e-14 ||
            (std::abs(ratio - best_ratio) <= 1e-14 && leaving < m_ && basis_[i] < basis_[leaving])) {
          best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving == m_) throw Error(ErrorCode::kUnbounded, "lp: objective unbounded above");
      pivot(leaving, entering);
    }
  }

  bool is_basic(std::size_t col) const {
    return std::find(basis_.begin(), basis_.end(), col) != basis_.end();
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_{0};
  Options opt_;
  std::vector<double> cells_;
  std::vector<double> rhs_;
  std::vector<double> sign_;
  std::vector<std::size_t> basis_;
  std::vector<double> final_cost_;
  std::size_t pivots_{0};
};

}  // namespace

Result solve(const Problem& problem, const Options& options) {
  Tableau tableau(problem, options);
  if (tableau.phase_one() > options.feasibility_tol) {
    throw Error(ErrorCode::kInfeasible, "lp: constraint set is empty");
  }
  tableau.purge_artificials();
  tableau.phase_two(problem.objective);
  return tableau.result(problem);
}

bool feasible(const Problem& problem, const Options& options) {
  Tableau tableau(problem, options);
  return tableau.phase_one() <= options.feasibility_tol;
}

}  // namespace persuasion::lp
