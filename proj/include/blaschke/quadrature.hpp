#pragma once

#include <vector>

namespace blaschke {

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// Gauss-Legendre rule with the given number of nodes, mapped to [0, 1].
GaussRule gauss_legendre_unit(int count);

}  // namespace blaschke
