#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qplab/errors.hpp"

namespace qplab {

/// Kahan compensated accumulator.  All series evaluation goes through this;
/// the conditionally convergent sums are cancellation-heavy and plain
/// summation loses digits.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

struct TrajectoryMeta {
  std::uint64_t seed = 0;
  std::size_t truncation = 0;
  std::string generator;
};

/// Time grid plus real observable values.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> values;
  TrajectoryMeta meta;

  void validate() const {
    if (times.size() != values.size())
      throw structural_error("trajectory: times/values length mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
        throw validation_error("trajectory: non-finite entry");
      if (i > 0 && !(times[i] > times[i - 1]))
        throw validation_error("trajectory: times not strictly increasing");
    }
  }
};

inline void require_time_grid(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]))
      throw validation_error("time grid: non-finite time");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw validation_error("time grid: not strictly increasing");
  }
}

}  // namespace qplab
