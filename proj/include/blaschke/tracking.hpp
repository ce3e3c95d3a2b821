#pragma once

#include <span>
#include <vector>

#include "blaschke/blaschke_product.hpp"
#include "blaschke/config.hpp"
#include "blaschke/geometry.hpp"
#include "blaschke/permutation.hpp"

namespace blaschke {

/// The n preimages of w under B, in a fixed order.
struct Fiber {
  cplx w;
  std::vector<cplx> points;
  double separation = 0.0;  // min pairwise distance
};

double min_pairwise_distance(std::span<const cplx> pts);

/// Preimages of w0 from the roots of P - w0 Q, Newton-polished and sorted
/// lexicographically by (re, im). Throws FiberCollision when the points are
/// closer than 10 newton_tol.
Fiber initial_fiber(const BlaschkeProduct& b, cplx w0, const Config& cfg = {});

/// Grid point (64 x 64 over the disc) maximizing min(dist to S, dist to the circle).
cplx choose_base_point(std::span<const cplx> branch_values);

struct LoopSystem {
  cplx base;
  std::vector<cplx> branch_values;  // sorted by arg(beta - base)
  std::vector<double> head_radii;
  std::vector<PathSpec> loops;      // loops[i] encircles branch_values[i]
  PathSpec boundary_loop;           // circle |w| = (1 + max|beta|)/2 via a radial stem
};

/// Lollipop loops based at w0, one per branch value. Stems detour around
/// other branch values they pass too close to.
LoopSystem build_loops(std::span<const cplx> branch_values, cplx w0);

struct TraceRow {
  double t;  // arc length from the path start
  cplx w;
  std::vector<cplx> z;
};

struct TrackResult {
  Fiber end;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  double min_separation = 0.0;
  double max_residual = 0.0;
  std::vector<TraceRow> trace;  // filled when requested; accepted_steps + 1 rows
};

/// Euler predictor dz = dw / B'(z) with Newton correction on B(z) = w. A step
/// is accepted when every Newton run converges in at most 5 iterations and the
/// fiber stays separated by more than 10x the largest correction; otherwise
/// the step is halved. points[i] of the result continues input points[i].
TrackResult track(const BlaschkeProduct& b, const Fiber& fiber, const PathSpec& path, const Config& cfg = {},
                  bool record_trace = false);

/// Monodromy of a closed loop: end.points[i] == start.points[tau(i)].
/// Throws AmbiguousMatching if nearest-neighbour matching is not a bijection
/// within separation / 3.
Permutation loop_permutation(const BlaschkeProduct& b, const Fiber& fiber0, const PathSpec& loop,
                             const Config& cfg = {});

/// Matches moved points back onto reference points (same semantics as
/// loop_permutation).
Permutation match_fibers(std::span<const cplx> reference, std::span<const cplx> moved, double bound);

/// Min fiber separation over 32 points on each circle |w - beta| = r, and the
/// least-squares slope of log(separation) against log(r).
struct SeparationScaling {
  std::vector<double> radii;
  std::vector<double> separations;
  double slope = 0.0;
};
SeparationScaling separation_scaling(const BlaschkeProduct& b, cplx beta, std::span<const double> radii,
                                     const Config& cfg = {});

}  // namespace blaschke
