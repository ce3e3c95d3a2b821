#include "blaschke/znmodel.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "blaschke/bundle.hpp"
#include "blaschke/commutant.hpp"
#include "blaschke/error.hpp"
#include "blaschke/monodromy.hpp"

namespace blaschke {

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw Error(ErrorKind::InvalidInput, "znmodel", "zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  std::int64_t g = std::gcd(n, d);
  num = n / g;
  den = d / g;
}

Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }

Eigen::MatrixXd zn_projection(int n, int i, int size) {
  if (n < 1 || i < 0 || i >= n) throw Error(ErrorKind::InvalidInput, "znmodel", "need 0 <= i < n");
  if (size < n) throw Error(ErrorKind::InvalidInput, "znmodel", "truncation size below n");
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(size, size);
  for (int k = i; k < size; k += n) p(k, k) = 1.0;
  return p;
}

std::pair<Rational, Rational> u_i_norm_check(int n, int i, int k) {
  if (n < 1 || i < 0 || i >= n || k < 0) throw Error(ErrorKind::InvalidInput, "znmodel", "need 0 <= i < n, k >= 0");
  // ||z^m||^2 = (1/pi) int r^{2m} r dr dtheta = 1/(m+1).
  Rational lhs = Rational(n) * Rational(1, static_cast<std::int64_t>(n) * k + i + 1);
  // (1/pi) int r^{2k} r^{-2(n-i-1)/n} r dr dtheta = 2 / (e + 1), e = 2k + 1 - 2(n-i-1)/n.
  Rational exponent = Rational(2 * k + 1) - Rational(2 * (n - i - 1), n);
  Rational rhs = Rational(2) / (exponent + Rational(1));
  return {lhs, rhs};
}

ZnReport zn_end_to_end(int n, const Config& cfg) {
  if (n < 1 || n > 8) throw Error(ErrorKind::InvalidInput, "znmodel", "z^n model supports 1 <= n <= 8");
  ZnReport rep;
  rep.n = n;
  nlohmann::json checks = nlohmann::json::object();
  auto check = [&](const std::string& name, bool ok) { checks[name] = ok; };

  BlaschkeProduct b = BlaschkeProduct::power(n);
  MonodromyRep mono = compute_representation(b, cfg);
  const int q = orbital_count(mono.generators, n);
  CommutantBasis cb = commutant_basis(mono.generators, n, cfg.svd_rel_threshold);
  auto [commutative, max_comm] = is_commutative(cb, cfg.commutator_tol);

  if (n == 1) {
    check("branch_set_empty", mono.branch_values.empty());
    check("q_equals_1", q == 1);
    check("dim_equals_1", cb.dim == 1);
  } else {
    check("branch_set_is_origin", mono.branch_values.size() == 1 && std::abs(mono.branch_values[0]) < 1e-12);
    check("generator_is_n_cycle", mono.generators.size() == 1 && mono.generators[0].is_full_cycle());
    check("boundary_is_n_cycle", mono.boundary_perm.is_full_cycle());
    check("q_equals_n", q == n);
    check("dim_equals_n", cb.dim == n);
  }
  check("commutative", commutative);

  std::vector<Eigen::MatrixXcd> projections;
  if (commutative) projections = minimal_projections(cb, cfg.seed, cfg.eigen_gap, cfg.commutator_tol).projections;
  bool rank_one = static_cast<int>(projections.size()) == n;
  for (const auto& p : projections) rank_one = rank_one && std::abs(p.trace().real() - 1.0) < 1e-8;
  check("n_rank_one_projections", rank_one);

  // Residue classes of the Bergman basis: each L_{n,i} reduces the truncated T_{z^n}.
  const int size = 4 * n + 3;
  Eigen::MatrixXcd t = truncated_matrix(b, size);
  bool reducing = true;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXcd p = zn_projection(n, i, size).cast<std::complex<double>>();
    reducing = reducing && (p * t - t * p).norm() == 0.0 && (p * t.adjoint() - t.adjoint() * p).norm() == 0.0;
  }
  check("residue_projections_reduce", reducing);

  // Gamma sends L_{n,i} into the range of exactly one minimal projection, and
  // distinct residues land in distinct projections.
  bool recovered = rank_one;
  if (recovered) {
    InverseBranches inv = InverseBranches::standard(b, cfg);
    cplx z = std::polar(0.37, 0.9);
    std::vector<int> hit(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n && recovered; ++i) {
      GammaSample g = gamma_apply(inv, Poly::monomial(i), z);
      Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(g.values.data(), n);
      v.normalize();
      int owner = -1;
      for (int a = 0; a < n; ++a)
        if ((projections[static_cast<std::size_t>(a)] * v - v).norm() < 1e-8) owner = a;
      if (owner < 0 || hit[static_cast<std::size_t>(owner)]++) recovered = false;
    }
  }
  check("residue_classes_recovered", recovered);

  rep.pass = true;
  for (const auto& [name, ok] : checks.items()) rep.pass = rep.pass && ok.get<bool>();
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : mono.generators) gens.push_back(g.images());
  rep.json = {{"schema", "1"},
              {"n", n},
              {"generators", gens},
              {"q_orbitals", q},
              {"commutant_dim", cb.dim},
              {"commutative", commutative},
              {"max_commutator", max_comm},
              {"num_minimal_projections", projections.size()},
              {"checks", checks},
              {"pass", rep.pass}};
  return rep;
}

}  // namespace blaschke
