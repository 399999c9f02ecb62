#pragma once

#ifdef __FAST_MATH__
#error "fast-math reorders floating point operations and breaks compensated summation"
#endif

#include <cmath>

namespace hoqmc {

// Neumaier's variant of Kahan summation: the carry also captures the error
// when the incoming term is larger than the running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void add(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.carry_);
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace hoqmc
