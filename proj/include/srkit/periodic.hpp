#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace srk {

/// Location of a time inside a uniform periodic grid.
struct GridPosition {
  long long period_index = 0;  ///< floor(t / T)
  std::size_t cell = 0;        ///< grid cell [cell*h, (cell+1)*h)
  double offset = 0.0;         ///< t - period_index*T - cell*h, in [0, h]
};

/// A T-periodic function given by samples on the uniform grid t_j = j*T/n,
/// j = 0..n-1, and linear interpolation between them (wrapping at T).
/// The cumulative integral is the exact integral of the interpolant, i.e. the
/// composite trapezoid rule on the grid.
class PeriodicFunction {
 public:
  PeriodicFunction() = default;
  PeriodicFunction(double period, std::vector<double> samples);

  double period() const { return period_; }
  std::size_t size() const { return samples_.size(); }
  double spacing() const { return spacing_; }
  std::span<const double> samples() const { return samples_; }
  double node_time(std::size_t j) const { return static_cast<double>(j) * spacing_; }

  GridPosition locate(double t) const;

  double operator()(double t) const;

  /// Integral of the interpolant from 0 to t (any real t).
  double cumulative(double t) const;
  double integral(double from, double to) const { return cumulative(to) - cumulative(from); }
  double period_integral() const { return cumulative_.back(); }

  /// Cumulative integral at grid node j (0..n, node n is t = T).
  double cumulative_at_node(std::size_t j) const { return cumulative_[j]; }
  /// Sample at node j, wrapping so that node n is node 0.
  double node_value(std::size_t j) const { return samples_[j % samples_.size()]; }

  double max_value() const;
  double min_value() const;

 private:
  double period_ = 0.0;
  double spacing_ = 0.0;
  std::vector<double> samples_;
  std::vector<double> cumulative_;  // n + 1 entries
};

}  // namespace srk
