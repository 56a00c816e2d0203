#ifndef WKM_SUMMATION_HPP
#define WKM_SUMMATION_HPP

#include <cmath>
#include <span>

namespace wkm {

/// Neumaier's variant of Kahan summation. Every cost accumulation in the
/// library goes through this so that mixed-magnitude weights do not lose
/// low-order terms.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

}  // namespace wkm

#endif  // WKM_SUMMATION_HPP
