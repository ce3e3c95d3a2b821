#include "blaschke/cpoly.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "blaschke/error.hpp"

namespace blaschke {

Poly::Poly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  trim();
}

void Poly::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == cplx(0.0)) coeffs_.pop_back();
}

Poly Poly::monomial(int k, cplx c) {
  std::vector<cplx> v(static_cast<std::size_t>(k) + 1, 0.0);
  v.back() = c;
  return Poly(std::move(v));
}

Poly Poly::from_roots(std::span<const cplx> roots) {
  std::vector<cplx> c{1.0};
  for (cplx r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return Poly(std::move(c));
}

cplx Poly::operator()(cplx z) const {
  cplx v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * z + *it;
  return v;
}

std::pair<cplx, cplx> Poly::eval_with_derivative(cplx z) const {
  cplx v = 0.0;
  cplx d = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    d = d * z + v;
    v = v * z + *it;
  }
  return {v, d};
}

Poly Poly::derivative() const {
  if (degree() == 0) return Poly();
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Poly(std::move(d));
}

double Poly::norm1() const {
  double s = 0.0;
  for (cplx c : coeffs_) s += std::abs(c);
  return s;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<cplx> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + cplx(-1.0) * b; }

Poly operator*(const Poly& a, const Poly& b) {
  std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Poly(std::move(c));
}

Poly operator*(cplx s, const Poly& p) {
  std::vector<cplx> c = p.coeffs_;
  for (cplx& x : c) x *= s;
  return Poly(std::move(c));
}

double cluster_radius(double tol, int m, double cap) {
  return std::min(cap, std::pow(tol, 1.0 / std::max(1, m)));
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Rounding-error bound for Horner at z: sum |c_k| |z|^k.
double horner_bound(const Poly& p, double r) {
  double s = 0.0;
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * r + std::abs(*it);
  return s;
}

// Newton on p^(m-1), accepted only while |p| does not grow.
cplx polish(const Poly& p, cplx c, int m) {
  Poly q = p;
  for (int k = 1; k < m; ++k) q = q.derivative();
  double best = std::abs(p(c));
  for (int it = 0; it < 8; ++it) {
    auto [v, d] = q.eval_with_derivative(c);
    if (d == cplx(0.0) || v == cplx(0.0)) break;
    cplx next = c - v / d;
    double r = std::abs(p(next));
    if (!(r <= best)) break;
    best = r;
    if (std::abs(next - c) <= 4 * kEps * std::abs(c)) {
      c = next;
      break;
    }
    c = next;
  }
  return c;
}

}  // namespace

std::pair<std::vector<cplx>, bool> aberth(const Poly& p, const RootOptions& opts) {
  const int n = p.degree();
  if (n < 1) throw Error(ErrorKind::InvalidInput, "cpoly", "roots of a constant polynomial");
  if (!(opts.tol > 0)) throw Error(ErrorKind::InvalidInput, "cpoly", "root tolerance must be positive");

  const cplx lead = p.leading();
  double radius = 0.0;
  for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(p[k] / lead));
  radius += 1.0;

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(0.0, 0.5);
  std::vector<cplx> z(n);
  const double step = 2 * std::numbers::pi / n;
  for (int i = 0; i < n; ++i) {
    double angle = 0.4 + step * (i + jitter(rng));
    z[i] = std::polar(radius, angle);
  }

  std::vector<char> done(n, 0);
  int remaining = n;
  for (int iter = 0; iter < opts.max_iter && remaining > 0; ++iter) {
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      auto [v, d] = p.eval_with_derivative(z[i]);
      if (std::abs(v) <= 4 * n * kEps * horner_bound(p, std::abs(z[i]))) {
        done[i] = 1;
        --remaining;
        continue;
      }
      cplx s = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) s += 1.0 / (z[i] - z[j]);
      cplx denom = d - v * s;
      if (denom == cplx(0.0)) {
        z[i] += cplx(1e-8, 1e-8) * (1.0 + std::abs(z[i]));
        continue;
      }
      cplx corr = v / denom;
      z[i] -= corr;
      if (std::abs(corr) <= kEps * std::abs(z[i])) {
        done[i] = 1;
        --remaining;
      }
    }
  }
  return {z, remaining == 0};
}

std::vector<RootCluster> roots(const Poly& p, const RootOptions& opts) {
  auto [approx, converged] = aberth(p, opts);
  (void)converged;

  struct Group {
    std::vector<cplx> members;
    cplx center;
  };
  std::vector<Group> groups;
  for (cplx z : approx) groups.push_back({{z}, z});

  // Merge the closest pair while it is inside the radius for the merged size.
  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < groups.size(); ++i)
      for (std::size_t j = i + 1; j < groups.size(); ++j) {
        double d = std::abs(groups[i].center - groups[j].center);
        int m = static_cast<int>(groups[i].members.size() + groups[j].members.size());
        if (d < cluster_radius(opts.tol, m, opts.merge_cap) && d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    if (!std::isfinite(best)) break;
    auto& a = groups[bi];
    a.members.insert(a.members.end(), groups[bj].members.begin(), groups[bj].members.end());
    cplx sum = 0.0;
    for (cplx z : a.members) sum += z;
    a.center = sum / static_cast<double>(a.members.size());
    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(bj));
  }

  const double bound = opts.tol * (1.0 + p.norm1());
  std::vector<RootCluster> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    int m = static_cast<int>(g.members.size());
    cplx c = polish(p, g.center, m);
    double spread = 0.0;
    for (cplx z : g.members) spread = std::max(spread, std::abs(z - c));
    // Far from the unit circle the evaluation itself rounds at eps * sum |c_k| |z|^k.
    double scale = 0.0, zk = 1.0;
    for (cplx ck : p.coeffs()) {
      scale += std::abs(ck) * zk;
      zk *= std::abs(c);
    }
    const double limit = std::max(bound, 8.0 * (p.degree() + 1) * std::numeric_limits<double>::epsilon() * scale);
    double residual = std::abs(p(c));
    if (!(residual <= limit)) {
      char msg[128];
      std::snprintf(msg, sizeof msg, "root residual %.3g above bound %.3g at |z| = %.3g", residual, limit,
                    std::abs(c));
      throw Error(ErrorKind::NoConvergence, "cpoly", msg);
    }
    out.push_back({c, m, spread});
  }
  return out;
}

}  // namespace blaschke
