#include "blaschke/permutation.hpp"

#include <algorithm>
#include <functional>

#include "blaschke/error.hpp"

namespace blaschke {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<char> seen(images_.size(), 0);
  for (int v : images_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)])
      throw Error(ErrorKind::InvalidInput, "monodromy", "image array is not a bijection");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return Permutation(std::move(v));
}

Permutation Permutation::cycle(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = (i + 1) % n;
  return Permutation(std::move(v));
}

Permutation Permutation::transposition(int n, int a, int b) {
  auto v = identity(n).images_;
  std::swap(v.at(static_cast<std::size_t>(a)), v.at(static_cast<std::size_t>(b)));
  return Permutation(std::move(v));
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if ((*this)(i) != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<int> v(images_.size());
  for (int i = 0; i < size(); ++i) v[static_cast<std::size_t>((*this)(i))] = i;
  return Permutation(std::move(v));
}

std::vector<int> Permutation::cycle_type() const {
  std::vector<int> lengths;
  std::vector<char> seen(images_.size(), 0);
  for (int i = 0; i < size(); ++i) {
    if (seen[static_cast<std::size_t>(i)]) continue;
    int len = 0;
    for (int j = i; !seen[static_cast<std::size_t>(j)]; j = (*this)(j)) {
      seen[static_cast<std::size_t>(j)] = 1;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  return lengths;
}

Permutation Permutation::conjugated_by(const Permutation& pi) const {
  return compose(pi, compose(*this, pi.inverse()));
}

std::string Permutation::to_string() const {
  std::string s = "[";
  for (int i = 0; i < size(); ++i) {
    if (i) s += ",";
    s += std::to_string((*this)(i));
  }
  return s + "]";
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidInput, "monodromy", "composing permutations of different degree");
  std::vector<int> v(static_cast<std::size_t>(a.size()));
  for (int i = 0; i < a.size(); ++i) v[static_cast<std::size_t>(i)] = a(b(i));
  return Permutation(std::move(v));
}

}  // namespace blaschke
