#pragma once

#include <nlohmann/json.hpp>

#include "blaschke/blaschke_product.hpp"
#include "blaschke/config.hpp"

namespace blaschke {

nlohmann::json config_to_json(const Config& cfg);

struct AnalysisOutcome {
  nlohmann::json report;
  bool checks_pass = false;
};

/// Branch data, monodromy, orbitals, commutant and minimal projections for B,
/// with every cross-check recorded under "theorem_checks".
AnalysisOutcome analyze(const BlaschkeProduct& b, const Config& cfg = {});

struct GammaOptions {
  long budget = 100'000;
  int samples = 100;
  double isometry_bound = 1e-2;
  double intertwining_bound = 1e-8;
};

struct GammaOutcome {
  nlohmann::json report;
  bool pass = false;
};

/// Isometry (Gram of 1, z, z^2), intertwining and disjointness checks of Gamma.
GammaOutcome verify_gamma(const BlaschkeProduct& b, const GammaOptions& opts, const Config& cfg = {});

}  // namespace blaschke
