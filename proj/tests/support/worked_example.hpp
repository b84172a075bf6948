#pragma once

#include <cmath>

#include "persuasion/domain.hpp"
#include "persuasion/models.hpp"

namespace persuasion::testing {

// Two states, outcomes (x, y, z). The principal likes x, the agent likes y.
struct WorkedExample {
  Utility u = normalize_utility(std::vector<double>{1.0, -1.0, 0.0});
  Utility v = normalize_utility(std::vector<double>{0.0, 1.0, -1.0});
  Belief prior{{0.5, 0.5}};
  Lottery x = Lottery::degenerate(3, 0);
  Lottery y = Lottery::degenerate(3, 1);
  Lottery z = Lottery::degenerate(3, 2);
  Act f = Act({x, x});
  Act g = Act({y, z});
  Menu menu = Menu({f, g}, "A");
  Environment env{prior, u};

  SignalStructure full_info() const { return full_information(prior); }
};

inline const double kRootHalf = 1.0 / std::sqrt(2.0);

}  // namespace persuasion::testing
