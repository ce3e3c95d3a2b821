#include "blaschke/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>

#include "blaschke/error.hpp"
#include "blaschke/quadrature.hpp"

namespace blaschke {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;
constexpr double kDomainMargin = 1e-4;

cplx circle_exit(cplx from, double angle) {
  cplx e = std::polar(1.0, angle);
  double b = (from * std::conj(e)).real();
  double t = -b + std::sqrt(b * b + 1.0 - std::norm(from));
  return from + t * e;
}

}  // namespace

double CutDisc::distance_to_cuts(cplx z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : cuts) d = std::min(d, segment_distance(c.start, c.end, z));
  return d;
}

bool CutDisc::contains(cplx z, double margin) const {
  return std::abs(z) < 1.0 - margin && distance_to_cuts(z) > margin;
}

CutDisc make_cut_disc(std::span<const cplx> branch_values, cplx avoid) {
  CutDisc cd;
  cd.branch_values.assign(branch_values.begin(), branch_values.end());
  const auto& beta = cd.branch_values;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    double clear = std::min(0.04, std::abs(avoid - beta[i]));
    for (std::size_t j = 0; j < beta.size(); ++j)
      if (j != i) clear = std::min(clear, std::abs(beta[i] - beta[j]));
    const double delta = clear / 4.0;
    const double base = beta[i] == cplx(0.0) ? std::numbers::pi : std::arg(beta[i]);

    bool placed = false;
    for (int m = 0; m < 400 && !placed; ++m) {
      double frac = std::fmod(m * kGolden, 1.0);
      double angle = base + (m == 0 ? 0.0 : (frac - 0.5) * std::min(kTwoPi, 0.2 * m));
      cplx end = circle_exit(beta[i], angle);
      bool ok = segment_distance(beta[i], end, avoid) > delta;
      for (std::size_t j = 0; j < beta.size() && ok; ++j)
        if (j != i) ok = segment_distance(beta[i], end, beta[j]) > delta;
      for (const auto& c : cd.cuts) {
        if (!ok) break;
        ok = segments_distance(beta[i], end, c.start, c.end) > delta;
      }
      if (ok) {
        cd.cuts.push_back({beta[i], end});
        placed = true;
      }
    }
    if (!placed) throw Error(ErrorKind::PathBlocked, "bundle", "could not place disjoint cuts");
  }
  return cd;
}

InverseBranches::InverseBranches(BlaschkeProduct b, Fiber base, CutDisc cuts, Config cfg)
    : b_(std::move(b)), base_(std::move(base)), cuts_(std::move(cuts)), cfg_(cfg) {
  if (cuts_.distance_to_cuts(base_.w) <= kDomainMargin)
    throw Error(ErrorKind::InvalidInput, "bundle", "base point lies on a cut");
}

InverseBranches InverseBranches::standard(const BlaschkeProduct& b, const Config& cfg) {
  BranchData bd = branch_data(b, cfg);
  cplx w0 = choose_base_point(bd.branch_values);
  CutDisc cuts = make_cut_disc(bd.branch_values, w0);
  return InverseBranches(b, initial_fiber(b, w0, cfg), std::move(cuts), cfg);
}

PathSpec InverseBranches::route(cplx from, cplx to) const {
  const auto& beta = cuts_.branch_values;

  // Nodes ring each cut tip; the ring shrinks when other cuts, branch values
  // or the circle come closer than route_offset.
  std::vector<cplx> nodes{from, to};
  double eps = cfg_.route_offset;
  for (std::size_t i = 0; i < cuts_.cuts.size(); ++i) {
    const auto& c = cuts_.cuts[i];
    double room = 1.0 - std::abs(c.start);
    for (std::size_t j = 0; j < cuts_.cuts.size(); ++j)
      if (j != i) room = std::min(room, segment_distance(cuts_.cuts[j].start, cuts_.cuts[j].end, c.start));
    const double ring = std::min(cfg_.route_offset, 0.3 * room);
    eps = std::min(eps, ring);
    double a = std::arg(c.end - c.start);
    for (int m = 0; m < 8; ++m) nodes.push_back(c.start + std::polar(ring, a + std::numbers::pi * (2 * m + 1) / 8));
  }
  std::vector<double> cut_dist(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) cut_dist[i] = cuts_.distance_to_cuts(nodes[i]);

  auto visible = [&](std::size_t ia, std::size_t ib) {
    cplx a = nodes[ia], b = nodes[ib];
    if (!(std::abs(a) < 1.0 && std::abs(b) < 1.0)) return false;
    double margin = 0.25 * std::min({eps, cut_dist[ia], cut_dist[ib]});
    for (const auto& c : cuts_.cuts)
      if (segments_distance(a, b, c.start, c.end) <= margin) return false;
    for (cplx p : beta)
      if (segment_distance(a, b, p) < 0.5 * std::min({eps, std::abs(a - p), std::abs(b - p)})) return false;
    return true;
  };

  // Dijkstra over the (dense) visibility graph.
  const std::size_t count = nodes.size();
  std::vector<double> dist(count, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> prev(count, count);
  std::vector<char> done(count, 0);
  dist[0] = 0.0;
  for (;;) {
    std::size_t u = count;
    for (std::size_t i = 0; i < count; ++i)
      if (!done[i] && std::isfinite(dist[i]) && (u == count || dist[i] < dist[u])) u = i;
    if (u == count || u == 1) break;
    done[u] = 1;
    for (std::size_t v = 0; v < count; ++v) {
      if (done[v] || v == u) continue;
      double nd = dist[u] + std::abs(nodes[u] - nodes[v]);
      if (nd < dist[v] && visible(u, v)) {
        dist[v] = nd;
        prev[v] = u;
      }
    }
  }
  if (!std::isfinite(dist[1])) throw Error(ErrorKind::PathBlocked, "bundle", "no cut-avoiding route to the target");

  std::vector<cplx> waypoints;
  for (std::size_t v = 1; v != count; v = prev[v]) {
    waypoints.push_back(nodes[v]);
    if (v == 0) break;
  }
  std::reverse(waypoints.begin(), waypoints.end());
  std::vector<Segment> segs;
  for (std::size_t i = 1; i < waypoints.size(); ++i) segs.push_back(Line{waypoints[i - 1], waypoints[i]});
  return PathSpec::make(std::move(segs), beta);
}

std::vector<cplx> InverseBranches::continue_along(const std::vector<cplx>& waypoints) const {
  PathSpec path;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    PathSpec leg = route(waypoints[i - 1], waypoints[i]);
    path = path.segments.empty() ? leg : path.then(leg);
  }
  if (path.segments.empty()) return base_.points;
  return track(b_, base_, path, cfg_).end.points;
}

std::vector<cplx> InverseBranches::values(cplx z) const {
  if (!cuts_.contains(z, kDomainMargin))
    throw Error(ErrorKind::InvalidInput, "bundle", "point is not inside the cut disc");
  return continue_along({base_.w, z});
}

std::vector<cplx> InverseBranches::values_via(cplx waypoint, cplx z) const {
  if (!cuts_.contains(z, kDomainMargin) || !cuts_.contains(waypoint, kDomainMargin))
    throw Error(ErrorKind::InvalidInput, "bundle", "point is not inside the cut disc");
  return continue_along({base_.w, waypoint, z});
}

std::vector<cplx> gamma_from_branches(const BlaschkeProduct& b, const Function& f, std::span<const cplx> sigma) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(sigma.size()));
  std::vector<cplx> out;
  out.reserve(sigma.size());
  for (cplx s : sigma) out.push_back(f(s) / b.derivative(s) * scale);
  return out;
}

GammaSample gamma_apply(const InverseBranches& inv, const Function& f, cplx z) {
  auto sigma = inv.values(z);
  return {z, gamma_from_branches(inv.product(), f, sigma)};
}

GammaSample gamma_apply(const InverseBranches& inv, const Poly& f, cplx z) {
  return gamma_apply(inv, Function([&f](cplx u) { return f(u); }), z);
}

std::vector<cplx> sample_cut_disc(const CutDisc& cuts, int count, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < count) {
    cplx z = std::polar(std::sqrt(uni(rng)), kTwoPi * uni(rng));
    if (cuts.contains(z, margin)) out.push_back(z);
  }
  return out;
}

double verify_intertwining(const InverseBranches& inv, std::span<const Poly> polys, int samples, std::uint64_t seed) {
  if (samples < 10) throw Error(ErrorKind::InvalidInput, "bundle", "intertwining check needs at least 10 samples");
  const auto& b = inv.product();
  double worst = 0.0;
  for (cplx z : sample_cut_disc(inv.cut_disc(), samples, seed)) {
    auto sigma = inv.values(z);
    for (const auto& f : polys) {
      auto gf = gamma_from_branches(b, [&](cplx u) { return f(u); }, sigma);
      auto gbf = gamma_from_branches(b, [&](cplx u) { return b(u) * f(u); }, sigma);
      for (std::size_t i = 0; i < sigma.size(); ++i) worst = std::max(worst, std::abs(gbf[i] - z * gf[i]));
    }
  }
  return worst;
}

double verify_intertwining(const InverseBranches& inv, const Poly& f, int samples, std::uint64_t seed) {
  return verify_intertwining(inv, std::span<const Poly>(&f, 1), samples, seed);
}

DisjointnessResult verify_disjoint_images(const InverseBranches& inv, int samples, std::uint64_t seed) {
  if (samples < 100) throw Error(ErrorKind::InvalidInput, "bundle", "disjointness check needs at least 100 samples");
  DisjointnessResult res;
  res.min_separation = std::numeric_limits<double>::infinity();
  for (cplx z : sample_cut_disc(inv.cut_disc(), samples, seed)) {
    auto sigma = inv.values(z);
    double sep = sigma.size() > 1 ? min_pairwise_distance(sigma) : std::numeric_limits<double>::infinity();
    res.min_separation = std::min(res.min_separation, sep);
    try {
      Fiber fiber = initial_fiber(inv.product(), z, inv.config());
      match_fibers(fiber.points, sigma, std::isfinite(sep) ? sep / 3 : 1.0);
    } catch (const Error&) {
      res.bijective = false;
    }
    ++res.samples;
  }
  return res;
}

PartitionResult verify_partition(const InverseBranches& inv, int samples, std::uint64_t seed) {
  const auto& b = inv.product();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  PartitionResult res;
  for (int attempt = 0; attempt < 50 * samples && res.tested < samples; ++attempt) {
    cplx u = std::polar(0.999 * std::sqrt(uni(rng)), kTwoPi * uni(rng));
    auto [w, d] = b.eval_with_derivative(u);
    if (!inv.cut_disc().contains(w, 1e-3) || std::abs(d) < 1e-6) continue;
    bool near_branch = false;
    for (cplx beta : inv.cut_disc().branch_values) near_branch = near_branch || std::abs(w - beta) < 1e-3;
    if (near_branch) continue;
    auto sigma = inv.values(w);
    int hits = 0;
    for (cplx s : sigma) hits += std::abs(s - u) < 1e-7 ? 1 : 0;
    ++res.tested;
    if (hits != 1) ++res.violations;
  }
  return res;
}

cplx bergman_inner(const Poly& f, const Poly& g) {
  cplx s = 0.0;
  for (int k = 0; k <= std::min(f.degree(), g.degree()); ++k) s += f[k] * std::conj(g[k]) / (k + 1.0);
  return s;
}

namespace {

// Fibers for the isometry quadrature. Labels are irrelevant there: the
// integrand sums over all branches. Consecutive points are close, so Newton
// continuation from the previous fiber is tried before a fresh root solve.
class FiberStream {
 public:
  FiberStream(const BlaschkeProduct& b, const Config& cfg) : b_(b), cfg_(cfg) {}

  const std::vector<cplx>& at(cplx w) {
    if (!(have_ && try_continue(w))) solve(w);
    w_ = w;
    have_ = true;
    return z_;
  }
  const std::vector<cplx>& derivatives() const { return dz_; }

 private:
  bool try_continue(cplx w) {
    const std::size_t n = z_.size();
    next_.resize(n);
    dnext_.resize(n);
    double max_corr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx pred = z_[i] + (w - w_) / dz_[i];
      cplx zi = pred;
      bool conv = false;
      for (int it = 0; it <= 6; ++it) {
        auto [v, d] = b_.eval_with_derivative(zi);
        if (std::abs(v - w) <= cfg_.newton_tol) {
          dnext_[i] = d;
          conv = true;
          break;
        }
        if (it == 6) break;
        zi -= (v - w) / d;
      }
      if (!conv) return false;
      next_[i] = zi;
      max_corr = std::max(max_corr, std::abs(zi - pred));
    }
    if (n > 1 && !(min_pairwise_distance(next_) > 10 * max_corr)) return false;
    z_.swap(next_);
    dz_.swap(dnext_);
    return true;
  }

  void solve(cplx w) {
    Poly eq = b_.numerator() - w * b_.denominator();
    RootOptions ro{cfg_.root_tol, cfg_.root_merge_cap, cfg_.root_max_iter, cfg_.seed};
    z_.clear();
    dz_.clear();
    for (const auto& c : roots(eq, ro)) {
      if (c.multiplicity != 1) throw Error(ErrorKind::FiberCollision, "bundle", "quadrature node too close to S");
      cplx zi = c.center;
      for (int it = 0; it < 3; ++it) {
        auto [v, d] = b_.eval_with_derivative(zi);
        zi -= (v - w) / d;
      }
      z_.push_back(zi);
      dz_.push_back(b_.derivative(zi));
    }
  }

  const BlaschkeProduct& b_;
  const Config& cfg_;
  bool have_ = false;
  cplx w_;
  std::vector<cplx> z_, dz_, next_, dnext_;
};

struct ExclusionCluster {
  std::vector<std::size_t> members;
  cplx center;
  double radius = 0.0;
};

// Branch values whose exclusion discs would overlap share one disc, centered
// at their mean with radius spread + exclusion_radius. Merging repeats until
// the discs are disjoint; each disc is then clipped to the inner edge.
std::vector<ExclusionCluster> exclusion_clusters(std::span<const cplx> beta, double exclusion, double inner_edge) {
  std::vector<ExclusionCluster> cl;
  auto refresh = [&](ExclusionCluster& c) {
    cplx sum = 0.0;
    for (std::size_t i : c.members) sum += beta[i];
    c.center = sum / static_cast<double>(c.members.size());
    double spread = 0.0;
    for (std::size_t i : c.members) spread = std::max(spread, std::abs(beta[i] - c.center));
    c.radius = spread + exclusion;
  };
  for (std::size_t i = 0; i < beta.size(); ++i) {
    cl.push_back({{i}, beta[i], 0.0});
    refresh(cl.back());
  }
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t a = 0; a < cl.size() && !merged; ++a)
      for (std::size_t c = a + 1; c < cl.size() && !merged; ++c)
        if (std::abs(cl[a].center - cl[c].center) < cl[a].radius + cl[c].radius) {
          cl[a].members.insert(cl[a].members.end(), cl[c].members.begin(), cl[c].members.end());
          cl.erase(cl.begin() + static_cast<std::ptrdiff_t>(c));
          refresh(cl[a]);
          merged = true;
        }
  }
  for (auto& c : cl) {
    double spread = c.radius - exclusion;
    c.radius = std::min(c.radius, inner_edge - std::abs(c.center));
    if (!(c.radius > spread + 0.25 * exclusion))
      throw Error(ErrorKind::InvalidInput, "bundle", "branch value too close to the boundary annulus");
  }
  return cl;
}

int lcm_ramification(const BranchData& bd, std::size_t beta_index) {
  int l = 1;
  for (int idx : bd.critical_over[beta_index]) l = std::lcm(l, bd.critical_points[static_cast<std::size_t>(idx)].multiplicity + 1);
  return std::max(l, 2);
}

}  // namespace

IsometryResult isometry_gram(const BlaschkeProduct& b, std::span<const Poly> polys, const IsometryOptions& opts,
                             const Config& cfg) {
  if (opts.budget < 10'000) throw Error(ErrorKind::InvalidInput, "bundle", "isometry budget must be at least 1e4");
  const auto m = static_cast<Eigen::Index>(polys.size());
  IsometryResult res;
  res.budget = opts.budget;
  res.exact = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index c = 0; c < m; ++c) res.exact(a, c) = bergman_inner(polys[a], polys[c]);

  BranchData bd = branch_data(b, cfg);
  const auto& beta = bd.branch_values;
  const double inner_edge = 1.0 - opts.boundary_annulus;
  const auto clusters = exclusion_clusters(beta, opts.exclusion_radius, inner_edge);
  for (const auto& c : clusters) res.disc_radii.push_back(c.radius);

  // With Gamma_i = f(sigma_i) sigma_i' / sqrt(n), the bundle inner product
  // n * sum_i Gamma_i(f) conj(Gamma_i(g)) reduces to
  // sum_i f(z_i) conj(g(z_i)) / |B'(z_i)|^2 over the fiber {z_i} of w.
  std::vector<cplx> fa(static_cast<std::size_t>(m));
  auto accumulate = [&](FiberStream& stream, cplx w, double weight, Eigen::MatrixXcd& acc) {
    const auto& z = stream.at(w);
    const auto& dz = stream.derivatives();
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double inv = 1.0 / std::norm(dz[i]);
      for (Eigen::Index a = 0; a < m; ++a) fa[static_cast<std::size_t>(a)] = polys[a](z[i]);
      for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index c = 0; c < m; ++c)
          acc(a, c) += weight * inv * fa[static_cast<std::size_t>(a)] * std::conj(fa[static_cast<std::size_t>(c)]);
    }
  };

  // Main region: one jittered sample per cell of a square grid over [-1, 1]^2.
  res.sampled = Eigen::MatrixXcd::Zero(m, m);
  {
    FiberStream stream(b, cfg);
    const long side = static_cast<long>(std::floor(std::sqrt(static_cast<double>(opts.budget))));
    const double cell = 2.0 / side;
    const double weight = cell * cell / std::numbers::pi;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (long row = 0; row < side; ++row) {
      for (long k = 0; k < side; ++k) {
        const long col = (row % 2 == 0) ? k : side - 1 - k;
        const double jx = uni(rng), jy = uni(rng);
        cplx w(-1.0 + (col + jx) * cell, -1.0 + (row + jy) * cell);
        if (std::abs(w) >= inner_edge) continue;
        bool excluded = false;
        for (const auto& c : clusters) excluded = excluded || std::abs(w - c.center) < c.radius;
        if (excluded) continue;
        accumulate(stream, w, weight, res.sampled);
        ++res.evaluated_samples;
      }
    }
  }

  // Excluded discs. A smooth partition of unity phi_j ~ |w - beta_j|^-6 splits
  // each disc among its branch values; piece j is integrated in polar
  // coordinates about beta_j with r = rho(theta) s^L, which turns the
  // branch-point singularity of |sigma'|^2 into a polynomial in s. Where
  // another branch value sits, phi_j vanishes to high order.
  res.excluded = Eigen::MatrixXcd::Zero(m, m);
  const GaussRule radial = gauss_legendre_unit(64);
  for (const auto& cl : clusters) {
    const bool single = cl.members.size() == 1;
    for (std::size_t j : cl.members) {
      FiberStream stream(b, cfg);
      const int power = lcm_ramification(bd, j) * (single ? 1 : 2);
      const int angles = 48 * power;
      const cplx d = beta[j] - cl.center;
      for (int t = 0; t < angles; ++t) {
        const double theta = kTwoPi * (t + 0.5) / angles;
        const cplx dir = std::polar(1.0, theta);
        const cplx rel = d * std::conj(dir);
        const double rho = -rel.real() + std::sqrt(cl.radius * cl.radius - rel.imag() * rel.imag());
        for (std::size_t q = 0; q < radial.nodes.size(); ++q) {
          const double sq = radial.nodes[q];
          const double r = rho * std::pow(sq, power);
          // The disc of radius 1e-11 about beta_j carries negligible mass and
          // its fibers are too tight to resolve.
          if (r < 1e-11) continue;
          const cplx w = beta[j] + r * dir;
          double phi = 1.0;
          if (!single) {
            double total = 0.0;
            for (std::size_t k : cl.members) total += std::pow(r / std::abs(w - beta[k]), 6);
            phi = 1.0 / total;
          }
          const double jac = rho * power * std::pow(sq, power - 1);
          const double weight = phi * radial.weights[q] * r * jac * (kTwoPi / angles) / std::numbers::pi;
          accumulate(stream, w, weight, res.excluded);
        }
      }
    }
  }

  // Boundary annulus: the integrand is smooth up to the circle.
  {
    FiberStream stream(b, cfg);
    const GaussRule ring = gauss_legendre_unit(24);
    const int angles = 2048;
    for (std::size_t q = 0; q < ring.nodes.size(); ++q) {
      const double r = inner_edge + opts.boundary_annulus * ring.nodes[q];
      const double weight = ring.weights[q] * opts.boundary_annulus * r * (kTwoPi / angles) / std::numbers::pi;
      for (int t = 0; t < angles; ++t) accumulate(stream, std::polar(r, kTwoPi * (t + 0.5) / angles), weight, res.excluded);
    }
  }

  res.estimate = res.sampled + res.excluded;
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index c = 0; c < m; ++c) {
      res.relative_error =
          std::max(res.relative_error, std::abs(res.estimate(a, c) - res.exact(a, c)) / (1.0 + std::abs(res.exact(a, c))));
      res.excluded_mass_bound = std::max(res.excluded_mass_bound, std::abs(res.excluded(a, c)));
    }
  return res;
}

double verify_isometry(const BlaschkeProduct& b, const Poly& f, const Poly& g, long budget, std::uint64_t seed,
                       const Config& cfg) {
  std::vector<Poly> polys{f, g};
  IsometryOptions opts;
  opts.budget = budget;
  opts.seed = seed;
  opts.exclusion_radius = cfg.exclusion_radius;
  opts.boundary_annulus = cfg.boundary_annulus;
  auto res = isometry_gram(b, polys, opts, cfg);
  return std::abs(res.estimate(0, 1) - res.exact(0, 1)) / (1.0 + std::abs(res.exact(0, 1)));
}

}  // namespace blaschke
