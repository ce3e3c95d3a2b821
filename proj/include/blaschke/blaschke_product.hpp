#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <span>
#include <vector>

#include "blaschke/config.hpp"
#include "blaschke/cpoly.hpp"

namespace blaschke {

/// B(z) = e^{i theta} prod (z - a_i) / (1 - conj(a_i) z) = P(z) / Q(z).
/// Immutable after construction.
class BlaschkeProduct {
 public:
  /// Zeros must satisfy |a| < 1 - 1e-9 and there must be at least one.
  BlaschkeProduct(double theta, std::vector<cplx> zeros);

  /// z^n.
  static BlaschkeProduct power(int n);
  /// Parse {"theta": real, "zeros": [[re, im], ...]}.
  static BlaschkeProduct from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  double theta() const { return theta_; }
  const std::vector<cplx>& zeros() const { return zeros_; }
  int order() const { return static_cast<int>(zeros_.size()); }
  const Poly& numerator() const { return p_; }
  const Poly& denominator() const { return q_; }
  /// P'Q - PQ', whose zeros in the disc are the critical points.
  const Poly& critical_numerator() const { return crit_; }

  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;
  /// B(z) and B'(z) from one pass over P and Q.
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const;

  double max_zero_modulus() const;

 private:
  double theta_;
  std::vector<cplx> zeros_;
  Poly p_, q_, crit_;
};

/// Composition outer(inner(z)); zeros are the inner-preimages of the outer zeros.
BlaschkeProduct compose(const BlaschkeProduct& outer, const BlaschkeProduct& inner,
                        const Config& cfg = {});

struct BranchData {
  std::vector<RootCluster> critical_points;  // inside the disc
  std::vector<cplx> branch_values;           // deduplicated images
  /// For each branch value, the indices of critical points over it.
  std::vector<std::vector<int>> critical_over;
};

/// Critical points in D and their images S. Throws DegenerateClustering when
/// two branch values sit in [dedup_tol, 10 dedup_tol] of each other, and
/// NoConvergence when the critical count inside D is not n-1.
BranchData branch_data(const BlaschkeProduct& b, const Config& cfg = {});

/// Taylor coefficients b_0..b_{N-1} of B at 0.
std::vector<cplx> taylor(const BlaschkeProduct& b, int count);
/// ceil(log(1e-14) / log(max|a| + 1e-3)), capped at 4096.
int default_taylor_length(const BlaschkeProduct& b);

/// Matrix of multiplication by B on the orthonormal basis sqrt(k+1) z^k of
/// the Bergman space, truncated to N x N.
Eigen::MatrixXcd truncated_matrix(const BlaschkeProduct& b, int size);

}  // namespace blaschke
