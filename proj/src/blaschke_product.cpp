#include "blaschke/blaschke_product.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blaschke/error.hpp"

namespace blaschke {

namespace {
constexpr double kMaxZeroModulus = 1.0 - 1e-9;
}

BlaschkeProduct::BlaschkeProduct(double theta, std::vector<cplx> zeros)
    : theta_(theta), zeros_(std::move(zeros)) {
  if (zeros_.empty()) throw Error(ErrorKind::InvalidInput, "blaschke", "a Blaschke product needs at least one zero");
  if (!std::isfinite(theta_)) throw Error(ErrorKind::InvalidInput, "blaschke", "theta must be finite");
  for (cplx a : zeros_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) || !(std::abs(a) < kMaxZeroModulus))
      throw Error(ErrorKind::InvalidInput, "blaschke", "zero outside the open disc |a| < 1 - 1e-9");
  }
  p_ = std::polar(1.0, theta_) * Poly::from_roots(zeros_);
  Poly q = Poly::constant(1.0);
  for (cplx a : zeros_) q = q * Poly({1.0, -std::conj(a)});
  q_ = std::move(q);
  // The top coefficient of P'Q - PQ' is (deg P - deg Q) lead(P) lead(Q);
  // set it exactly so rounding cannot leave a spurious root near infinity.
  std::vector<cplx> c = (p_.derivative() * q_ - p_ * q_.derivative()).coeffs();
  const std::size_t top = static_cast<std::size_t>(p_.degree() + q_.degree() - 1);
  c.resize(std::max(c.size(), top + 1), 0.0);
  c[top] = static_cast<double>(p_.degree() - q_.degree()) * p_.leading() * q_.leading();
  crit_ = Poly(std::move(c));
}

BlaschkeProduct BlaschkeProduct::power(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "blaschke", "order must be positive");
  return BlaschkeProduct(0.0, std::vector<cplx>(static_cast<std::size_t>(n), 0.0));
}

BlaschkeProduct BlaschkeProduct::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("zeros") || !j["zeros"].is_array())
    throw Error(ErrorKind::InvalidInput, "blaschke", "spec needs a \"zeros\" array");
  double theta = 0.0;
  if (j.contains("theta")) {
    if (!j["theta"].is_number()) throw Error(ErrorKind::InvalidInput, "blaschke", "\"theta\" must be a number");
    theta = j["theta"].get<double>();
  }
  std::vector<cplx> zeros;
  for (const auto& z : j["zeros"]) {
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
      throw Error(ErrorKind::InvalidInput, "blaschke", "each zero must be [re, im]");
    zeros.emplace_back(z[0].get<double>(), z[1].get<double>());
  }
  return BlaschkeProduct(theta, std::move(zeros));
}

nlohmann::json BlaschkeProduct::to_json() const {
  nlohmann::json zs = nlohmann::json::array();
  for (cplx a : zeros_) zs.push_back({a.real(), a.imag()});
  return {{"theta", theta_}, {"zeros", zs}};
}

cplx BlaschkeProduct::operator()(cplx z) const { return p_(z) / q_(z); }

std::pair<cplx, cplx> BlaschkeProduct::eval_with_derivative(cplx z) const {
  auto [p, dp] = p_.eval_with_derivative(z);
  auto [q, dq] = q_.eval_with_derivative(z);
  return {p / q, (dp * q - p * dq) / (q * q)};
}

cplx BlaschkeProduct::derivative(cplx z) const { return eval_with_derivative(z).second; }

double BlaschkeProduct::max_zero_modulus() const {
  double m = 0.0;
  for (cplx a : zeros_) m = std::max(m, std::abs(a));
  return m;
}

BlaschkeProduct compose(const BlaschkeProduct& outer, const BlaschkeProduct& inner, const Config& cfg) {
  RootOptions ro{cfg.root_tol, cfg.root_merge_cap, cfg.root_max_iter, cfg.seed};
  std::vector<cplx> zeros;
  for (cplx a : outer.zeros()) {
    Poly eq = inner.numerator() - a * inner.denominator();
    for (const auto& c : roots(eq, ro))
      for (int m = 0; m < c.multiplicity; ++m) zeros.push_back(c.center);
  }
  // Fix the phase by comparing at one boundary point.
  BlaschkeProduct unit(0.0, zeros);
  cplx probe = std::polar(1.0, 0.3);
  cplx ratio = outer(inner(probe)) / unit(probe);
  return BlaschkeProduct(std::arg(ratio), std::move(zeros));
}

BranchData branch_data(const BlaschkeProduct& b, const Config& cfg) {
  const int n = b.order();
  BranchData out;
  if (n < 2) return out;

  RootOptions ro{cfg.root_tol, cfg.root_merge_cap, cfg.root_max_iter, cfg.seed};
  int inside = 0;
  for (const auto& c : roots(b.critical_numerator(), ro)) {
    if (std::abs(c.center) < 1.0) {
      out.critical_points.push_back(c);
      inside += c.multiplicity;
    }
  }
  if (inside != n - 1)
    throw Error(ErrorKind::NoConvergence, "blaschke",
                "found " + std::to_string(inside) + " critical points in D, expected " + std::to_string(n - 1));

  const double tol = cfg.dedup_tol;
  for (std::size_t i = 0; i < out.critical_points.size(); ++i) {
    cplx v = b(out.critical_points[i].center);
    bool merged = false;
    for (std::size_t j = 0; j < out.branch_values.size(); ++j) {
      double d = std::abs(out.branch_values[j] - v);
      if (d < tol) {
        out.critical_over[j].push_back(static_cast<int>(i));
        merged = true;
        break;
      }
      if (d <= 10 * tol)
        throw Error(ErrorKind::DegenerateClustering, "blaschke",
                    "branch values " + std::to_string(d) + " apart, inside the ambiguity band");
    }
    if (!merged) {
      out.branch_values.push_back(v);
      out.critical_over.push_back({static_cast<int>(i)});
    }
  }
  return out;
}

std::vector<cplx> taylor(const BlaschkeProduct& b, int count) {
  if (count < 1) throw Error(ErrorKind::InvalidInput, "blaschke", "Taylor length must be positive");
  const auto& q = b.denominator().coeffs();  // q[0] == 1
  std::vector<cplx> recip(count, 0.0);
  recip[0] = 1.0 / q[0];
  for (int j = 1; j < count; ++j) {
    cplx s = 0.0;
    for (int k = 1; k <= std::min<int>(j, static_cast<int>(q.size()) - 1); ++k) s += q[k] * recip[j - k];
    recip[j] = -s / q[0];
  }
  const auto& p = b.numerator().coeffs();
  std::vector<cplx> out(count, 0.0);
  for (int j = 0; j < count; ++j)
    for (int k = 0; k <= std::min<int>(j, static_cast<int>(p.size()) - 1); ++k) out[j] += p[k] * recip[j - k];
  return out;
}

int default_taylor_length(const BlaschkeProduct& b) {
  double r = b.max_zero_modulus() + 1e-3;
  if (r >= 1.0) return 4096;
  double len = std::ceil(std::log(1e-14) / std::log(r));
  return static_cast<int>(std::clamp(len, static_cast<double>(b.order() + 1), 4096.0));
}

Eigen::MatrixXcd truncated_matrix(const BlaschkeProduct& b, int size) {
  if (size < b.order()) throw Error(ErrorKind::InvalidInput, "blaschke", "truncation size below the order");
  auto coeffs = taylor(b, size);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
  for (int k = 0; k < size; ++k)
    for (int row = k; row < size; ++row)
      m(row, k) = std::sqrt((k + 1.0) / (row + 1.0)) * coeffs[row - k];
  return m;
}

}  // namespace blaschke
