#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "blaschke/permutation.hpp"

namespace blaschke {

/// V(x)_j = x_{tau(j)}, i.e. V[j, tau(j)] = 1.
Eigen::MatrixXcd permutation_unitary(const Permutation& tau);

struct CommutantBasis {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> basis;  // Frobenius-orthonormal
  double max_residual = 0.0;            // max ||X V_i - V_i X||_F over the basis
  double max_commutator = 0.0;          // filled by is_commutative
  std::vector<Eigen::MatrixXcd> projections;
  int projection_retries = 0;
};

/// Nullspace of X -> (X V_i - V_i X)_i, by SVD with singular values below
/// rel_threshold * sigma_max treated as zero.
CommutantBasis commutant_basis(std::span<const Permutation> generators, int n, double rel_threshold = 1e-10);

/// Largest ||[X_a, X_b]||_F over basis pairs, and whether it is below tol.
std::pair<bool, double> is_commutative(const CommutantBasis& cb, double tol);

struct ProjectionResult {
  std::vector<Eigen::MatrixXcd> projections;
  int retries = 0;
};

/// Spectral projections of a random self-adjoint element of the algebra.
/// Throws NonCommutative when the basis does not commute, and
/// DegenerateGenericElement when five draws fail to split into dim pieces.
ProjectionResult minimal_projections(const CommutantBasis& cb, std::uint64_t seed = 0, double gap = 1e-6,
                                     double commutator_tol = 1e-8);

}  // namespace blaschke
