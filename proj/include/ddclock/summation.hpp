#pragma once

// Compensated accumulation and an order-fixed reduction of partial sums.
//
// Results must not depend on the thread count: work is always cut into the
// same blocks, each block is accumulated sequentially, and the block partials
// are combined by a fixed pairwise tree.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace ddclock {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }

  void merge(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Reduces `parts` with a balanced binary tree whose shape depends only on
/// parts.size(). `Merge` is called as merge(left, right) -> combined.
template <class T, class Merge>
T pairwise_reduce(std::span<const T> parts, Merge merge) {
  if (parts.empty()) return T{};
  if (parts.size() == 1) return parts[0];
  const std::size_t half = parts.size() / 2;
  return merge(pairwise_reduce(parts.first(half), merge), pairwise_reduce(parts.subspan(half), merge));
}

/// Threads used by the parallel kernels; 0 means the OpenMP default.
void set_num_threads(int n);
int num_threads();

}  // namespace ddclock
