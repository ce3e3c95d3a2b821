#include "blaschke/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "blaschke/error.hpp"

namespace blaschke {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr int kMaxNewton = 5;
constexpr double kInitialStep = 0.02;
constexpr double kMaxStep = 0.1;

// Newton on B(z) = w, keeping the iterate with the smallest residual.
cplx polish_preimage(const BlaschkeProduct& b, cplx z, cplx w, int iterations) {
  auto [v, d] = b.eval_with_derivative(z);
  double best = std::abs(v - w);
  for (int it = 0; it < iterations && best > 0.0; ++it) {
    cplx next = z - (v - w) / d;
    auto [v2, d2] = b.eval_with_derivative(next);
    double r = std::abs(v2 - w);
    if (!(r < best)) break;
    z = next;
    v = v2;
    d = d2;
    best = r;
  }
  return z;
}

double max_residual(const BlaschkeProduct& b, std::span<const cplx> z, cplx w) {
  double r = 0.0;
  for (cplx p : z) r = std::max(r, std::abs(b(p) - w));
  return r;
}

// Obstacles a stem must keep clear of: centers with their detour radii.
struct Obstacle {
  cplx center;
  double radius;
};

std::vector<Segment> stem_with_detours(cplx from, cplx to, const std::vector<Obstacle>& obstacles) {
  std::vector<Segment> segs;
  if (from == to) return segs;
  segs.push_back(Line{from, to});

  for (int pass = 0;; ++pass) {
    bool changed = false;
    std::vector<Segment> next;
    for (const auto& seg : segs) {
      const Line* line = std::get_if<Line>(&seg);
      if (!line) {
        next.push_back(seg);
        continue;
      }
      // Violating obstacles on this line, ordered along it.
      double len = std::abs(line->end - line->start);
      cplx u = (line->end - line->start) / len;
      std::vector<std::pair<double, const Obstacle*>> hits;
      for (const auto& o : obstacles) {
        // Endpoints placed on a detour circle must not register as violations.
        if (segment_distance(line->start, line->end, o.center) < o.radius * (1 - 1e-9)) {
          double t0 = ((o.center - line->start) * std::conj(u)).real();
          hits.emplace_back(t0, &o);
        }
      }
      if (hits.empty()) {
        next.push_back(seg);
        continue;
      }
      changed = true;
      std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      cplx cursor = line->start;
      for (const auto& [t0, o] : hits) {
        cplx foot = line->start + t0 * u;
        double d = std::abs(o->center - foot);
        double half = std::sqrt(std::max(0.0, o->radius * o->radius - d * d));
        if (t0 - half <= 0.0 || t0 + half >= len)
          throw Error(ErrorKind::LoopConstructionFailed, "tracking", "stem endpoint inside a detour disc");
        cplx p1 = line->start + (t0 - half) * u;
        cplx p2 = line->start + (t0 + half) * u;
        double a1 = std::arg(p1 - o->center);
        double sweep = std::remainder(std::arg(p2 - o->center) - a1, kTwoPi);
        // Minor arc keeps the obstacle on the same side as the straight stem.
        if (d == 0.0) sweep = std::numbers::pi;
        Arc arc{o->center, o->radius, a1, a1 + sweep};
        if (std::abs(p1 - cursor) > 0) next.push_back(Line{cursor, start_of(arc)});
        next.push_back(arc);
        cursor = end_of(arc);
      }
      next.push_back(Line{cursor, line->end});
    }
    segs = std::move(next);
    if (!changed) break;
    if (pass >= 10) throw Error(ErrorKind::LoopConstructionFailed, "tracking", "detour insertion did not settle");
  }
  return segs;
}

}  // namespace

double min_pairwise_distance(std::span<const cplx> pts) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::min(d, std::abs(pts[i] - pts[j]));
  return d;
}

Fiber initial_fiber(const BlaschkeProduct& b, cplx w0, const Config& cfg) {
  if (!(std::abs(w0) < 1.0)) throw Error(ErrorKind::InvalidInput, "tracking", "base value outside the disc");
  Poly eq = b.numerator() - w0 * b.denominator();
  RootOptions ro{cfg.root_tol, cfg.root_merge_cap, cfg.root_max_iter, cfg.seed};
  Fiber f;
  f.w = w0;
  for (const auto& c : roots(eq, ro)) {
    if (c.multiplicity != 1)
      throw Error(ErrorKind::FiberCollision, "tracking", "preimages of the base value coincide");
    f.points.push_back(polish_preimage(b, c.center, w0, 8));
  }
  std::sort(f.points.begin(), f.points.end(), [](cplx a, cplx c) {
    return a.real() < c.real() || (a.real() == c.real() && a.imag() < c.imag());
  });
  f.separation = f.points.size() > 1 ? min_pairwise_distance(f.points) : std::numeric_limits<double>::infinity();
  if (f.separation < 10 * cfg.newton_tol)
    throw Error(ErrorKind::FiberCollision, "tracking", "fiber separation below 10 newton_tol");
  if (max_residual(b, f.points, w0) > cfg.newton_tol)
    throw Error(ErrorKind::NoConvergence, "tracking", "fiber residual above newton_tol");
  return f;
}

cplx choose_base_point(std::span<const cplx> branch_values) {
  if (branch_values.empty()) return 0.0;
  constexpr int kGrid = 64;
  cplx best_point = 0.0;
  double best = -1.0;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      cplx w(-1.0 + 2.0 * i / (kGrid - 1), -1.0 + 2.0 * j / (kGrid - 1));
      double score = 1.0 - std::abs(w);
      if (score <= 0.0) continue;
      for (cplx beta : branch_values) score = std::min(score, std::abs(w - beta));
      if (score > best) {
        best = score;
        best_point = w;
      }
    }
  }
  return best_point;
}

LoopSystem build_loops(std::span<const cplx> branch_values, cplx w0) {
  LoopSystem sys;
  sys.base = w0;
  sys.branch_values.assign(branch_values.begin(), branch_values.end());
  for (cplx beta : sys.branch_values)
    if (std::abs(beta - w0) == 0.0) throw Error(ErrorKind::LoopConstructionFailed, "tracking", "base point on S");
  std::stable_sort(sys.branch_values.begin(), sys.branch_values.end(),
                   [&](cplx a, cplx c) { return std::arg(a - w0) < std::arg(c - w0); });

  const auto& beta = sys.branch_values;
  const std::size_t k = beta.size();
  for (std::size_t i = 0; i < k; ++i) {
    double r = std::min(1.0 - std::abs(beta[i]), std::abs(w0 - beta[i]));
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) r = std::min(r, std::abs(beta[i] - beta[j]));
    sys.head_radii.push_back(r / 3.0);
  }

  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Obstacle> others;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) others.push_back({beta[j], sys.head_radii[j] / 2.0});
    double r = sys.head_radii[i];
    cplx dir = (w0 - beta[i]) / std::abs(w0 - beta[i]);
    cplx entry = beta[i] + r * dir;
    auto stem = stem_with_detours(w0, entry, others);
    std::vector<Segment> segs = stem;
    double a0 = std::arg(dir);
    segs.push_back(Arc{beta[i], r, a0, a0 + kTwoPi});
    for (auto it = stem.rbegin(); it != stem.rend(); ++it) segs.push_back(reversed(*it));
    sys.loops.push_back(PathSpec::make(std::move(segs), beta));
  }

  double max_mod = 0.0;
  for (cplx b : beta) max_mod = std::max(max_mod, std::abs(b));
  double radius = (1.0 + max_mod) / 2.0;
  cplx dir = w0 == cplx(0.0) ? cplx(1.0) : w0 / std::abs(w0);
  cplx entry = radius * dir;
  std::vector<Obstacle> all;
  for (std::size_t j = 0; j < k; ++j) all.push_back({beta[j], sys.head_radii[j] / 2.0});
  auto stem = stem_with_detours(w0, entry, all);
  std::vector<Segment> segs = stem;
  double a0 = std::arg(dir);
  segs.push_back(Arc{0.0, radius, a0, a0 + kTwoPi});
  for (auto it = stem.rbegin(); it != stem.rend(); ++it) segs.push_back(reversed(*it));
  sys.boundary_loop = PathSpec::make(std::move(segs), beta);
  return sys;
}

TrackResult track(const BlaschkeProduct& b, const Fiber& fiber, const PathSpec& path, const Config& cfg,
                  bool record_trace) {
  if (!path.segments.empty() && std::abs(path.start() - fiber.w) > 1e-9)
    throw Error(ErrorKind::InvalidInput, "tracking", "path does not start at the fiber base value");

  const std::size_t n = fiber.points.size();
  std::vector<cplx> z = fiber.points;
  std::vector<cplx> dz(n);
  for (std::size_t i = 0; i < n; ++i) dz[i] = b.derivative(z[i]);
  cplx w = fiber.w;

  TrackResult res;
  res.min_separation = n > 1 ? min_pairwise_distance(z) : std::numeric_limits<double>::infinity();
  res.max_residual = max_residual(b, z, w);
  double t = 0.0;
  if (record_trace) res.trace.push_back({t, w, z});

  std::vector<cplx> znew(n), dznew(n);
  double h = kInitialStep;
  for (const auto& seg : path.segments) {
    const double len = length(seg);
    double s = 0.0;
    while (len - s > 1e-15) {
      // A step never covers more than half the distance to the nearest
      // obstacle, so a small loop cannot be skipped in a single chord.
      double cap = kMaxStep;
      for (cplx o : path.obstacles) cap = std::min(cap, 0.5 * std::abs(w - o));
      if (const auto* arc = std::get_if<Arc>(&seg)) cap = std::min(cap, 0.5 * arc->radius);
      const double hs = std::min(h, cap);
      const bool last = hs >= len - s;
      const double step = last ? len - s : hs;
      const cplx wn = last ? end_of(seg) : point_at(seg, s + step);

      bool ok = true;
      double max_corr = 0.0;
      double worst = 0.0;
      for (std::size_t i = 0; i < n && ok; ++i) {
        cplx pred = z[i] + (wn - w) / dz[i];
        cplx zi = pred;
        bool conv = false;
        for (int it = 0; it <= kMaxNewton; ++it) {
          auto [v, d] = b.eval_with_derivative(zi);
          double r = std::abs(v - wn);
          if (r <= cfg.newton_tol) {
            conv = true;
            worst = std::max(worst, r);
            dznew[i] = d;
            break;
          }
          if (it == kMaxNewton || d == cplx(0.0)) break;
          zi -= (v - wn) / d;
        }
        if (!conv || !(std::abs(zi) < 1.0)) {
          ok = false;
          break;
        }
        znew[i] = zi;
        max_corr = std::max(max_corr, std::abs(zi - pred));
      }
      double sep = std::numeric_limits<double>::infinity();
      if (ok && n > 1) {
        sep = min_pairwise_distance(znew);
        ok = sep > 10 * max_corr && sep > 10 * cfg.newton_tol;
      }
      if (!ok) {
        h = hs / 2;
        ++res.rejected_steps;
        if (h < cfg.step_floor) {
          if (n > 1 && min_pairwise_distance(z) <= 10 * cfg.newton_tol)
            throw Error(ErrorKind::FiberCollision, "tracking", "preimages merged along the path");
          throw Error(ErrorKind::StepFloorReached, "tracking", "step size fell below the floor near w = (" +
                                                                   std::to_string(w.real()) + ", " +
                                                                   std::to_string(w.imag()) + ")");
        }
        continue;
      }
      z.swap(znew);
      dz.swap(dznew);
      w = wn;
      s = last ? len : s + step;
      t += step;
      ++res.accepted_steps;
      res.min_separation = std::min(res.min_separation, sep);
      res.max_residual = std::max(res.max_residual, worst);
      if (record_trace) res.trace.push_back({t, w, z});
      h = std::min(h * 1.6, kMaxStep);
    }
  }

  for (cplx& p : z) p = polish_preimage(b, p, w, 3);
  res.end.w = w;
  res.end.points = std::move(z);
  res.end.separation =
      n > 1 ? min_pairwise_distance(res.end.points) : std::numeric_limits<double>::infinity();
  return res;
}

Permutation match_fibers(std::span<const cplx> reference, std::span<const cplx> moved, double bound) {
  const std::size_t n = reference.size();
  if (moved.size() != n) throw Error(ErrorKind::AmbiguousMatching, "tracking", "fiber sizes differ");
  std::vector<int> images(n);
  std::vector<char> used(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      double d = std::abs(moved[i] - reference[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    if (!(bd < bound) || used[best])
      throw Error(ErrorKind::AmbiguousMatching, "tracking", "end fiber does not match the start fiber bijectively");
    used[best] = 1;
    images[i] = static_cast<int>(best);
  }
  return Permutation(std::move(images));
}

Permutation loop_permutation(const BlaschkeProduct& b, const Fiber& fiber0, const PathSpec& loop,
                             const Config& cfg) {
  if (!loop.closed(1e-9)) throw Error(ErrorKind::InvalidInput, "tracking", "loop is not closed");
  auto res = track(b, fiber0, loop, cfg);
  double bound = fiber0.points.size() > 1 ? fiber0.separation / 3.0 : 1.0;
  return match_fibers(fiber0.points, res.end.points, bound);
}

SeparationScaling separation_scaling(const BlaschkeProduct& b, cplx beta, std::span<const double> radii,
                                     const Config& cfg) {
  SeparationScaling out;
  constexpr int kSamples = 32;
  for (double r : radii) {
    double sep = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kSamples; ++k) {
      cplx w = beta + std::polar(r, kTwoPi * (k + 0.5) / kSamples);
      sep = std::min(sep, initial_fiber(b, w, cfg).separation);
    }
    out.radii.push_back(r);
    out.separations.push_back(sep);
  }
  const std::size_t m = out.radii.size();
  if (m >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double x = std::log(out.radii[i]), y = std::log(out.separations[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return out;
}

}  // namespace blaschke
