#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace frn {

/// Dense square grid indexed by ordered node pair (i, j).  The diagonal is
/// storage-only: it is never meaningful and accessors assert i != j in debug
/// builds.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int n, T fill) : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {}

  int n() const { return n_; }

  T& operator()(int i, int j) {
    assert(i != j && i >= 0 && j >= 0 && i < n_ && j < n_);
    return data_[static_cast<std::size_t>(i) * n_ + j];
  }
  const T& operator()(int i, int j) const {
    assert(i != j && i >= 0 && j >= 0 && i < n_ && j < n_);
    return data_[static_cast<std::size_t>(i) * n_ + j];
  }

  /// Unchecked access, diagonal included; used by bulk loops that skip i == j
  /// themselves.
  T& at_raw(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const T& at_raw(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * n_ + j];
  }

  bool operator==(const Grid&) const = default;

 private:
  int n_ = 0;
  std::vector<T> data_;
};

}  // namespace frn
