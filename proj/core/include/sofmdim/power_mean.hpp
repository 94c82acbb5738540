#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "sofmdim/errors.hpp"

namespace sofmdim {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline void check_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("exponent p must satisfy 1 <= p <= inf");
}

/// Running (1/n sum x^p)^(1/p), or max for p = inf. Finite-p results are
/// clamped into [min, max], which the exact value always lies in; this
/// keeps rho_p <= rho_inf true in floating point as well.
class PowerMean {
 public:
  explicit PowerMean(double p) : p_(p) {}

  void add(double x) {
    ++n_;
    hi_ = std::max(hi_, x);
    lo_ = std::min(lo_, x);
    if (p_ == 1.0)
      sum_ += x;
    else if (p_ == 2.0)
      sum_ += x * x;
    else if (!std::isinf(p_))
      sum_ += std::pow(x, p_);
  }

  double value() const {
    if (n_ == 0) return 0.0;
    if (std::isinf(p_)) return hi_;
    const double mean = sum_ / static_cast<double>(n_);
    double r;
    if (p_ == 1.0)
      r = mean;
    else if (p_ == 2.0)
      r = std::sqrt(mean);
    else
      r = std::pow(mean, 1.0 / p_);
    return std::clamp(r, lo_, hi_);
  }

 private:
  double p_;
  double sum_ = 0.0;
  double hi_ = 0.0;
  double lo_ = kInfinity;
  std::size_t n_ = 0;
};

}  // namespace sofmdim
