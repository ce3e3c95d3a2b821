#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace blaschke {

using cplx = std::complex<double>;

/// Dense complex polynomial, coefficients in ascending degree.
/// Exact trailing zeros are trimmed so the leading coefficient is nonzero
/// (the zero polynomial is stored as a single 0 of degree 0).
class Poly {
 public:
  Poly() : coeffs_{cplx(0.0)} {}
  explicit Poly(std::vector<cplx> coeffs);
  Poly(std::initializer_list<cplx> coeffs) : Poly(std::vector<cplx>(coeffs)) {}

  static Poly constant(cplx c) { return Poly({c}); }
  static Poly monomial(int k, cplx c = 1.0);
  /// prod (z - r) for r in roots.
  static Poly from_roots(std::span<const cplx> roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx operator[](int k) const { return k <= degree() ? coeffs_[k] : cplx(0.0); }
  cplx leading() const { return coeffs_.back(); }
  bool is_zero() const { return degree() == 0 && coeffs_[0] == cplx(0.0); }

  cplx operator()(cplx z) const;
  /// Horner for p(z) and p'(z) together.
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const;

  Poly derivative() const;
  /// Sum of coefficient moduli.
  double norm1() const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(cplx s, const Poly& p);
  friend Poly operator*(const Poly& p, cplx s) { return s * p; }

 private:
  void trim();
  std::vector<cplx> coeffs_;
};

struct RootCluster {
  cplx center;
  int multiplicity = 1;
  double radius = 0.0;  // spread of the merged approximations
};

struct RootOptions {
  double tol = 1e-12;
  double merge_cap = 1e-3;
  int max_iter = 500;
  std::uint64_t seed = 0;
};

/// Aberth-Ehrlich iteration started from jittered points on the Cauchy
/// circle. Near-coincident approximations are merged into clusters and each
/// center is polished with Newton on the (m-1)-th derivative.
/// Throws Error(NoConvergence) when a center's residual exceeds
/// tol * (1 + |p|_1).
std::vector<RootCluster> roots(const Poly& p, const RootOptions& opts = {});

/// Raw Aberth approximations, one per root with multiplicity. Also returns
/// whether every approximation met the stopping rule.
std::pair<std::vector<cplx>, bool> aberth(const Poly& p, const RootOptions& opts = {});

/// Merge radius for a cluster of size m: min(cap, tol^(1/m)).
double cluster_radius(double tol, int m, double cap);

}  // namespace blaschke
