#pragma once

#include <complex>

namespace cavsig {

/// Kahan compensated accumulator; works componentwise for std::complex.
template <typename T>
class KahanSum {
 public:
  void add(const T& value) {
    const T y = value - compensation_;
    const T t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  const T& value() const { return sum_; }

 private:
  T sum_{};
  T compensation_{};
};

}  // namespace cavsig
