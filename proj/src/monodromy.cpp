#include "blaschke/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <unordered_set>

#include "blaschke/disjoint_set.hpp"
#include "blaschke/error.hpp"

namespace blaschke {

namespace {

std::uint64_t encode(const Permutation& p) {
  std::uint64_t key = 0;
  for (int i = 0; i < p.size(); ++i) key |= static_cast<std::uint64_t>(p(i)) << (4 * i);
  return key;
}

}  // namespace

std::vector<int> boundary_order(const LoopSystem& loops) {
  const cplx w0 = loops.base;
  const double stem = w0 == cplx(0.0) ? 0.0 : std::arg(w0);
  std::vector<int> order(loops.branch_values.size());
  std::vector<double> key(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = static_cast<int>(i);
    double rel = std::fmod(std::arg(loops.branch_values[i] - w0) - stem, 2 * std::numbers::pi);
    if (rel < 0) rel += 2 * std::numbers::pi;
    key[i] = rel;
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] < key[b]; });
  return order;
}

MonodromyRep compute_representation(const BlaschkeProduct& b, const Config& cfg) {
  MonodromyRep rep;
  rep.branch = branch_data(b, cfg);
  rep.base = choose_base_point(rep.branch.branch_values);
  rep.base_fiber = initial_fiber(b, rep.base, cfg);
  rep.loops = build_loops(rep.branch.branch_values, rep.base);
  rep.branch_values = rep.loops.branch_values;

  const int n = b.order();
  for (const auto& loop : rep.loops.loops) rep.generators.push_back(loop_permutation(b, rep.base_fiber, loop, cfg));
  rep.boundary_perm = loop_permutation(b, rep.base_fiber, rep.loops.boundary_loop, cfg);

  // Traversing loop a then loop b composes as tau_b o tau_a.
  Permutation product = Permutation::identity(n);
  for (int idx : boundary_order(rep.loops)) product = compose(rep.generators[static_cast<std::size_t>(idx)], product);
  rep.boundary_product = product;
  return rep;
}

std::vector<Permutation> group_closure(std::span<const Permutation> generators, int n, std::uint64_t cap) {
  if (n < 1 || n > 16) throw Error(ErrorKind::InvalidInput, "monodromy", "group closure supports 1 <= n <= 16");
  std::vector<Permutation> elements{Permutation::identity(n)};
  std::unordered_set<std::uint64_t> seen{encode(elements.front())};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& g : generators) {
      Permutation next = compose(g, elements[head]);
      if (seen.insert(encode(next)).second) {
        if (elements.size() >= cap)
          throw Error(ErrorKind::GroupTooLarge, "monodromy", "group order exceeds cap " + std::to_string(cap));
        elements.push_back(std::move(next));
      }
    }
  }
  return elements;
}

bool is_transitive(std::span<const Permutation> generators, int n) {
  DisjointSet ds(n);
  for (const auto& g : generators)
    for (int i = 0; i < n; ++i) ds.join(i, g(i));
  return ds.set_count() == 1;
}

int orbital_count(std::span<const Permutation> generators, int n) {
  DisjointSet ds(n * n);
  for (const auto& g : generators)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ds.join(i * n + j, g(i) * n + g(j));
  return ds.set_count();
}

}  // namespace blaschke
