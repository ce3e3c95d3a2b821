#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <utility>

#include "blaschke/config.hpp"

namespace blaschke {

/// Exact nonnegative-denominator fraction in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Diagonal 0/1 matrix selecting basis indices congruent to i mod n.
Eigen::MatrixXd zn_projection(int n, int i, int size);

/// ||U_i z^k||^2 in the Bergman space and ||z^k||^2 in the weighted space with
/// weight |z|^{-2(n-i-1)/n}, both as exact rationals (each equals n/(nk+i+1)).
std::pair<Rational, Rational> u_i_norm_check(int n, int i, int k);

struct ZnReport {
  int n = 0;
  bool pass = false;
  nlohmann::json json;
};

/// Runs the whole pipeline on z^n (1 <= n <= 8) and checks it against the
/// closed-form answer: branch set {0}, one n-cycle generator, q = dim = n,
/// n rank-one projections matching the residue-class subspaces.
ZnReport zn_end_to_end(int n, const Config& cfg = {});

}  // namespace blaschke
