#pragma once
#include <cstddef>
#include <vector>

namespace uhmc {

// Compensated summation; aggregation across replicas uses this so that the
// result is independent of evaluation order to well below 1e-12.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Streaming mean / variance / skewness.
class RunningMoments {
 public:
  void add(double v);
  std::size_t count() const { return n_; }
  double mean() const;
  double variance() const;  // unbiased
  double skewness() const;
  double stderr_mean() const;

 private:
  std::size_t n_ = 0;
  double m1_ = 0.0, m2_ = 0.0, m3_ = 0.0;
};

// Ordinary least squares y = a + b x; slope_se from residual variance.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};
SlopeFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace uhmc
