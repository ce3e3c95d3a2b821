#pragma once

#include <numeric>
#include <vector>

namespace blaschke {

class DisjointSet {
 public:
  explicit DisjointSet(int size) : parent_(static_cast<std::size_t>(size)), rank_(static_cast<std::size_t>(size), 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
    sets_ = size;
  }

  int find(int x) {
    int root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      int next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  void join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --sets_;
  }

  int set_count() const { return sets_; }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  int sets_ = 0;
};

}  // namespace blaschke
