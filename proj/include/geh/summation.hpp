#pragma once

#include <cmath>
#include <span>

namespace geh {

// Neumaier's variant of Kahan summation. Adding an exact zero leaves both
// the running sum and the compensation untouched, so sparse and dense
// enumerations of the same nonzero terms produce identical results.
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;

  constexpr void add(double term) noexcept {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      compensation_ += (sum_ - t) + term;
    } else {
      compensation_ += (term - t) + sum_;
    }
    sum_ = t;
  }

  constexpr CompensatedSum& operator+=(double term) noexcept {
    add(term);
    return *this;
  }

  [[nodiscard]] constexpr double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

inline double compensated_sum(std::span<const double> terms) noexcept {
  CompensatedSum acc;
  for (double t : terms) acc.add(t);
  return acc.value();
}

}  // namespace geh
