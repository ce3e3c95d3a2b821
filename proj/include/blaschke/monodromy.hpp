#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blaschke/blaschke_product.hpp"
#include "blaschke/config.hpp"
#include "blaschke/permutation.hpp"
#include "blaschke/tracking.hpp"

namespace blaschke {

/// The representation of pi_1(D \ S, w0) on the base fiber: one permutation
/// per branch value, in the order of LoopSystem.
struct MonodromyRep {
  cplx base;
  Fiber base_fiber;
  BranchData branch;
  LoopSystem loops;
  std::vector<cplx> branch_values;     // ordered like generators
  std::vector<Permutation> generators;
  Permutation boundary_perm;           // tracked independently along boundary_loop
  Permutation boundary_product;        // generators composed in boundary order

  int degree() const { return static_cast<int>(base_fiber.points.size()); }
};

MonodromyRep compute_representation(const BlaschkeProduct& b, const Config& cfg = {});

/// Loop indices in the order the boundary loop sweeps them (counterclockwise
/// from the boundary stem direction).
std::vector<int> boundary_order(const LoopSystem& loops);

/// All group elements reachable from the identity. Throws GroupTooLarge past cap.
std::vector<Permutation> group_closure(std::span<const Permutation> generators, int n,
                                       std::uint64_t cap = 3628800);

bool is_transitive(std::span<const Permutation> generators, int n);

/// Orbits of the generated group on ordered pairs {0..n-1}^2, by union-find.
int orbital_count(std::span<const Permutation> generators, int n);

}  // namespace blaschke
