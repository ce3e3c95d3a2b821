#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace blaschke {

/// Bijection of {0, ..., n-1} stored as its image array.
class Permutation {
 public:
  Permutation() = default;
  /// Throws InvalidInput unless images is a bijection.
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);
  /// The cycle (0 1 ... n-1): i -> i+1 mod n.
  static Permutation cycle(int n);
  static Permutation transposition(int n, int a, int b);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const;
  Permutation inverse() const;
  /// Cycle lengths, sorted descending.
  std::vector<int> cycle_type() const;
  bool is_full_cycle() const { return size() > 0 && cycle_type().front() == size(); }
  /// pi o this o pi^{-1}: the same map after relabeling point i as pi(i).
  Permutation conjugated_by(const Permutation& pi) const;
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// (a o b)(i) = a(b(i)).
Permutation compose(const Permutation& a, const Permutation& b);

}  // namespace blaschke
