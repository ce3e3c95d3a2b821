#pragma once

#include <cstdint>

namespace blaschke {

/// Every tolerance the pipeline uses, in one place. Defaults are what the
/// CLI reports under "tolerances".
struct Config {
  double root_tol = 1e-12;          // residual scale for polynomial roots
  double root_merge_cap = 1e-3;     // largest radius at which roots are merged
  int root_max_iter = 500;
  double newton_tol = 1e-11;        // |B(z) - w| accepted at tracking nodes
  double dedup_tol = 1e-6;          // branch value deduplication distance
  double step_floor = 1e-12;        // smallest tracking step before giving up
  double svd_rel_threshold = 1e-10; // nullity threshold relative to sigma_max
  double eigen_gap = 1e-6;          // eigenvalue grouping for projections
  double commutator_tol = 1e-8;
  std::uint64_t group_cap = 3628800;  // 10!
  double route_offset = 1e-3;       // visibility-node offset around cut tips
  double exclusion_radius = 0.05;   // isometry: disc excluded around each branch value
  double boundary_annulus = 0.02;   // isometry: annulus excluded at the unit circle
  std::uint64_t seed = 0;
};

}  // namespace blaschke
