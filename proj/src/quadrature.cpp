#include "blaschke/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "blaschke/error.hpp"

namespace blaschke {

GaussRule gauss_legendre_unit(int count) {
  if (count < 1) throw Error(ErrorKind::InvalidInput, "bundle", "quadrature needs at least one node");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(count));
  rule.weights.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // Newton on P_count from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace blaschke
