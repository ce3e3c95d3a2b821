#include "blaschke/commutant.hpp"

#include <algorithm>
#include <random>

#include "blaschke/error.hpp"

namespace blaschke {

Eigen::MatrixXcd permutation_unitary(const Permutation& tau) {
  const int n = tau.size();
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) v(j, tau(j)) = 1.0;
  return v;
}

CommutantBasis commutant_basis(std::span<const Permutation> generators, int n, double rel_threshold) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "commutant", "dimension must be positive");
  const int nn = n * n;
  CommutantBasis cb;

  // vec(XV - VX) = (V^T (x) I - I (x) V) vec(X), column-major vec. Permutation
  // matrices are real so the nullspace has a real orthonormal basis.
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(generators.size()) * nn, nn);
  for (std::size_t g = 0; g < generators.size(); ++g) {
    Eigen::MatrixXd v = permutation_unitary(generators[g]).real();
    for (int col = 0; col < n; ++col)
      for (int row = 0; row < n; ++row) {
        const int x = col * n + row;  // X(row, col)
        // (XV)(r, c) = sum_k X(r, k) V(k, c); (VX)(r, c) = sum_k V(r, k) X(k, c)
        for (int c = 0; c < n; ++c)
          if (v(col, c) != 0.0) system(static_cast<Eigen::Index>(g) * nn + c * n + row, x) += v(col, c);
        for (int r = 0; r < n; ++r)
          if (v(r, row) != 0.0) system(static_cast<Eigen::Index>(g) * nn + col * n + r, x) -= v(r, row);
      }
  }

  Eigen::MatrixXd null;
  if (system.rows() == 0) {
    null = Eigen::MatrixXd::Identity(nn, nn);
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > rel_threshold * smax && smax > 0.0) ++rank;
    null = svd.matrixV().rightCols(nn - rank);
  }

  cb.dim = static_cast<int>(null.cols());
  for (int a = 0; a < cb.dim; ++a) {
    Eigen::MatrixXd x = Eigen::Map<const Eigen::MatrixXd>(null.col(a).data(), n, n);
    // Fix the sign so the largest-magnitude entry is positive; keeps output stable.
    Eigen::Index r, c;
    x.cwiseAbs().maxCoeff(&r, &c);
    if (x(r, c) < 0) x = -x;
    cb.basis.push_back(x.cast<std::complex<double>>());
  }
  for (const auto& x : cb.basis)
    for (const auto& g : generators) {
      Eigen::MatrixXcd v = permutation_unitary(g);
      cb.max_residual = std::max(cb.max_residual, (x * v - v * x).norm());
    }
  return cb;
}

std::pair<bool, double> is_commutative(const CommutantBasis& cb, double tol) {
  double worst = 0.0;
  for (std::size_t a = 0; a < cb.basis.size(); ++a)
    for (std::size_t b = a + 1; b < cb.basis.size(); ++b)
      worst = std::max(worst, (cb.basis[a] * cb.basis[b] - cb.basis[b] * cb.basis[a]).norm());
  return {worst < tol, worst};
}

ProjectionResult minimal_projections(const CommutantBasis& cb, std::uint64_t seed, double gap, double commutator_tol) {
  if (!is_commutative(cb, commutator_tol).first)
    throw Error(ErrorKind::NonCommutative, "commutant", "commutant is not abelian; minimal projections are not unique");
  if (cb.basis.empty()) return {};
  const Eigen::Index n = cb.basis.front().rows();
  const std::complex<double> i_unit(0.0, 1.0);

  ProjectionResult out;
  for (int attempt = 0; attempt < 6; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& x : cb.basis) {
      const double c = coef(rng);
      const double d = coef(rng);
      h += c * (x + x.adjoint()) / 2.0 + d * (x - x.adjoint()) / (2.0 * i_unit);
    }
    h = (h + h.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();

    std::vector<Eigen::MatrixXcd> projections;
    Eigen::Index start = 0;
    for (Eigen::Index k = 1; k <= n; ++k) {
      if (k == n || vals(k) - vals(k - 1) > gap) {
        auto block = vecs.middleCols(start, k - start);
        projections.push_back(block * block.adjoint());
        start = k;
      }
    }
    if (static_cast<int>(projections.size()) == cb.dim) {
      out.projections = std::move(projections);
      return out;
    }
    ++out.retries;
  }
  throw Error(ErrorKind::DegenerateGenericElement, "commutant", "generic element did not split after 5 retries");
}

}  // namespace blaschke
