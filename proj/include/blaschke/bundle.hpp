#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "blaschke/blaschke_product.hpp"
#include "blaschke/config.hpp"
#include "blaschke/geometry.hpp"
#include "blaschke/tracking.hpp"

namespace blaschke {

struct Cut {
  cplx start;  // the branch value
  cplx end;    // on the unit circle
};

/// The disc with one straight cut per branch value, running away from the
/// origin (negative real axis for a branch value at 0). A cut that would come
/// near another cut, another branch value or the avoided point is rotated by
/// golden-ratio increments.
struct CutDisc {
  std::vector<cplx> branch_values;
  std::vector<Cut> cuts;

  double distance_to_cuts(cplx z) const;
  /// |z| < 1 - margin and z is more than margin away from every cut.
  bool contains(cplx z, double margin) const;
};

CutDisc make_cut_disc(std::span<const cplx> branch_values, cplx avoid);

/// The inverses sigma_1..sigma_n of B continued over the cut disc from a
/// labelled base fiber.
class InverseBranches {
 public:
  InverseBranches(BlaschkeProduct b, Fiber base, CutDisc cuts, Config cfg);

  /// Base point and cuts from the branch data; base fiber from initial_fiber.
  static InverseBranches standard(const BlaschkeProduct& b, const Config& cfg = {});

  const BlaschkeProduct& product() const { return b_; }
  const Fiber& base_fiber() const { return base_; }
  const CutDisc& cut_disc() const { return cuts_; }
  const Config& config() const { return cfg_; }

  /// Shortest polyline from `from` to `to` that crosses no cut, through
  /// nodes offset by route_offset around the cut tips. Throws PathBlocked.
  PathSpec route(cplx from, cplx to) const;

  /// sigma_i(z), i = 0..n-1. z must lie in the cut disc more than 1e-4 from
  /// every cut and from the circle.
  std::vector<cplx> values(cplx z) const;
  /// Same, but routed through an intermediate waypoint.
  std::vector<cplx> values_via(cplx waypoint, cplx z) const;

 private:
  std::vector<cplx> continue_along(const std::vector<cplx>& waypoints) const;

  BlaschkeProduct b_;
  Fiber base_;
  CutDisc cuts_;
  Config cfg_;
};

using Function = std::function<cplx(cplx)>;

/// Component i is f(sigma_i(z)) sigma_i'(z) / sqrt(n).
struct GammaSample {
  cplx z;
  std::vector<cplx> values;
};

GammaSample gamma_apply(const InverseBranches& inv, const Function& f, cplx z);
GammaSample gamma_apply(const InverseBranches& inv, const Poly& f, cplx z);
/// Gamma evaluated from already-computed branch values.
std::vector<cplx> gamma_from_branches(const BlaschkeProduct& b, const Function& f, std::span<const cplx> sigma);

/// Uniform sample in the cut disc, at least `margin` from cuts and the circle.
std::vector<cplx> sample_cut_disc(const CutDisc& cuts, int count, std::uint64_t seed, double margin = 1e-4);

/// max over samples, polynomials and components of |Gamma(Bf)_i - z Gamma(f)_i|.
double verify_intertwining(const InverseBranches& inv, std::span<const Poly> polys, int samples, std::uint64_t seed);
double verify_intertwining(const InverseBranches& inv, const Poly& f, int samples, std::uint64_t seed);

struct DisjointnessResult {
  double min_separation = 0.0;
  bool bijective = true;  // every sample's branch values are exactly the fiber over z
  int samples = 0;
};
DisjointnessResult verify_disjoint_images(const InverseBranches& inv, int samples, std::uint64_t seed);

/// Points u of the disc, pushed to w = B(u) in the cut disc, are recovered by
/// exactly one branch: sigma_i(w) = u for a single i.
struct PartitionResult {
  int tested = 0;
  int violations = 0;
};
PartitionResult verify_partition(const InverseBranches& inv, int samples, std::uint64_t seed);

struct IsometryOptions {
  long budget = 1'000'000;
  std::uint64_t seed = 0;
  double exclusion_radius = 0.05;
  double boundary_annulus = 0.02;
};

/// Gram matrices <Gamma f_a, Gamma f_b> estimated on the bundle side against
/// the exact Bergman inner products sum_k f_k conj(g_k) / (k + 1).
struct IsometryResult {
  Eigen::MatrixXcd estimate;
  Eigen::MatrixXcd exact;
  Eigen::MatrixXcd sampled;   // stratified sampling over the main region
  Eigen::MatrixXcd excluded;  // graded quadrature over the excluded discs and annulus
  double relative_error = 0.0;       // max |estimate - exact| / (1 + |exact|)
  double excluded_mass_bound = 0.0;  // max |excluded|
  std::vector<double> disc_radii;
  long budget = 0;
  long evaluated_samples = 0;
};

IsometryResult isometry_gram(const BlaschkeProduct& b, std::span<const Poly> polys, const IsometryOptions& opts,
                             const Config& cfg = {});
/// Relative error for a single pair (f, g). budget must be at least 1e4.
double verify_isometry(const BlaschkeProduct& b, const Poly& f, const Poly& g, long budget, std::uint64_t seed = 0,
                       const Config& cfg = {});

/// Exact Bergman inner product sum_k f_k conj(g_k) / (k + 1).
cplx bergman_inner(const Poly& f, const Poly& g);

}  // namespace blaschke
