#include "persuasion/concavify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "persuasion/lp.hpp"

namespace persuasion {

std::size_t default_grid_resolution(std::size_t states) {
  switch (states) {
    case 0:
    case 1:
    case 2: return 100;
    case 3: return 40;
    case 4: return 12;
    default: return 6;
  }
}

namespace {

void compositions(std::size_t parts, std::size_t total, std::vector<std::size_t>& current,
                  std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    current.push_back(total);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (std::size_t c = 0; c <= total; ++c) {
    current.push_back(c);
    compositions(parts - 1, total - c, current, out);
    current.pop_back();
  }
}

Belief lattice_belief(const std::vector<std::size_t>& counts, std::size_t resolution) {
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(resolution);
  }
  return Belief(std::move(p));
}

}  // namespace

// ---------------------------------------------------------- PosteriorGrid

PosteriorGrid::PosteriorGrid(std::size_t states, std::size_t resolution, const Belief& prior,
                             std::vector<Belief> extras)
    : states_(states), resolution_(resolution) {
  if (resolution == 0) throw Error(ErrorCode::kValidationError, "grid resolution must be positive");
  if (prior.size() != states) throw Error(ErrorCode::kDimensionMismatch, "prior size vs grid states");
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::size_t> scratch;
  compositions(states, resolution, scratch, counts);
  points_.reserve(counts.size() + 1 + extras.size());
  for (const auto& c : counts) points_.push_back(lattice_belief(c, resolution));
  lattice_size_ = points_.size();
  prior_index_ = find(prior);
  if (prior_index_ == size()) {
    points_.push_back(prior);
    prior_index_ = points_.size() - 1;
  }
  for (auto& e : extras) {
    if (e.size() != states) throw Error(ErrorCode::kDimensionMismatch, "grid extra point size");
    if (!contains(e)) {
      points_.push_back(e);
      extras_.push_back(std::move(e));
    }
  }
}

std::size_t PosteriorGrid::find(const Belief& belief, double tol) const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].approx_equal(belief, tol)) return i;
  }
  return points_.size();
}

PosteriorGrid PosteriorGrid::with_extras(const std::vector<Belief>& more) const {
  std::vector<Belief> all = extras_;
  all.insert(all.end(), more.begin(), more.end());
  return PosteriorGrid(states_, resolution_, prior(), std::move(all));
}

PosteriorGrid PosteriorGrid::refined() const { return PosteriorGrid(states_, 2 * resolution_, prior(), extras_); }

// -------------------------------------------------------- SignalStructure

SignalStructure::SignalStructure(std::vector<Belief> posteriors, std::vector<double> weights)
    : posteriors_(std::move(posteriors)), weights_(std::move(weights)) {
  if (posteriors_.empty() || posteriors_.size() != weights_.size()) {
    throw Error(ErrorCode::kValidationError, "signal structure posterior/weight sizes differ");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw Error(ErrorCode::kValidationError, "negative signal weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(ErrorCode::kValidationError, "signal weights sum to " + std::to_string(total));
  }
}

SignalStructure SignalStructure::uninformative(const Belief& prior) { return SignalStructure({prior}, {1.0}); }

Belief SignalStructure::barycenter() const {
  std::vector<double> p(posteriors_.front().size(), 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t s = 0; s < p.size(); ++s) p[s] += weights_[i] * posteriors_[i][s];
  }
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return Belief(std::move(p));
}

bool SignalStructure::is_bayes_plausible(const Belief& prior, double tol) const {
  return barycenter().approx_equal(prior, tol);
}

SignalStructure SignalStructure::pruned(double threshold) const {
  std::vector<Belief> post;
  std::vector<double> w;
  for (std::size_t i = 0; i < size(); ++i) {
    if (weights_[i] <= threshold) continue;
    auto it = std::find_if(post.begin(), post.end(),
                           [&](const Belief& b) { return b.approx_equal(posteriors_[i], 1e-12); });
    if (it == post.end()) {
      post.push_back(posteriors_[i]);
      w.push_back(weights_[i]);
    } else {
      w[static_cast<std::size_t>(it - post.begin())] += weights_[i];
    }
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return SignalStructure(std::move(post), std::move(w));
}

SignalStructure full_information(const Belief& prior) {
  std::vector<Belief> post;
  std::vector<double> w;
  for (std::size_t s = 0; s < prior.size(); ++s) {
    if (prior[s] <= 0.0) continue;
    post.push_back(Belief::degenerate(prior.size(), s));
    w.push_back(prior[s]);
  }
  return SignalStructure(std::move(post), std::move(w));
}

// -------------------------------------------------------------- Envelope

ValueProfile value_profile(const StageValue& stage_value, const PosteriorGrid& grid) {
  ValueProfile profile{grid, {}};
  profile.values.reserve(grid.size());
  for (const auto& q : grid.points()) profile.values.push_back(stage_value(q));
  return profile;
}

EnvelopeResult concave_envelope_at(const ValueProfile& profile, const Belief& prior) {
  const auto& grid = profile.grid;
  if (!grid.contains(prior)) throw Error(ErrorCode::kGridMissingPrior, "prior is not a grid point");
  if (profile.values.size() != grid.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "profile values vs grid size");
  }
  // Row s: sum_i w_i q_i(s) = p0(s). Summing the rows gives sum_i w_i = 1.
  lp::Problem program;
  program.num_vars = grid.size();
  program.objective = profile.values;
  for (std::size_t s = 0; s < grid.states(); ++s) {
    std::vector<double> row(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) row[i] = grid[i][s];
    program.rows.push_back(std::move(row));
    program.rhs.push_back(prior[s]);
  }
  const auto solved = lp::solve(program);

  std::vector<Belief> post;
  std::vector<double> w;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (solved.solution[i] > 1e-10) {
      post.push_back(grid[i]);
      w.push_back(solved.solution[i]);
    }
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  EnvelopeResult out{0.0, SignalStructure(std::move(post), std::move(w)),
                     std::max(solved.slackness_residual, solved.primal_residual)};
  // Evaluate at the pruned support so the returned value is attained exactly.
  const SignalStructure& tau = out.tau_star;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    out.value += tau.weights()[i] * profile.values[grid.find(tau.posteriors()[i])];
  }
  // Never report below the uninformative value.
  const double at_prior = profile.values[grid.find(prior)];
  if (out.value < at_prior) {
    out.value = at_prior;
    out.tau_star = SignalStructure::uninformative(prior);
  }
  return out;
}

std::vector<Belief> indifference_points(const Menu& menu, const std::vector<Utility>& tastes) {
  std::vector<Belief> out;
  if (menu.states() != 2) return out;
  for (const auto& v : tastes) {
    for (std::size_t i = 0; i < menu.size(); ++i) {
      const auto a = utility_act(v, menu[i]);
      for (std::size_t j = i + 1; j < menu.size(); ++j) {
        const auto b = utility_act(v, menu[j]);
        const double d1 = a[0] - b[0];
        const double d2 = a[1] - b[1];
        if (std::abs(d2 - d1) < 1e-14) continue;
        const double t = d2 / (d2 - d1);
        if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;
        Belief q({t, 1.0 - t});
        // Only pairs that tie at the top of v's ranking are kinks of phi.
        const double tied = t * a[0] + (1.0 - t) * a[1];
        bool top = true;
        for (std::size_t m = 0; m < menu.size() && top; ++m) {
          const auto c = utility_act(v, menu[m]);
          top = t * c[0] + (1.0 - t) * c[1] <= tied + 1e-12;
        }
        if (!top) continue;
        const bool seen = std::any_of(out.begin(), out.end(), [&](const Belief& b) { return b.approx_equal(q, 1e-12); });
        if (!seen) out.push_back(std::move(q));
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Belief& x, const Belief& y) { return x[0] < y[0]; });
  return out;
}

}  // namespace persuasion
