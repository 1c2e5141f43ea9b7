#include "srkit/periodic.hpp"

#include <algorithm>
#include <cmath>

#include "srkit/errors.hpp"

namespace srk {

PeriodicFunction::PeriodicFunction(double period, std::vector<double> samples)
    : period_(period), samples_(std::move(samples)) {
  if (!(period_ > 0.0) || !std::isfinite(period_)) {
    throw InvalidParams("periodic function: period must be positive and finite");
  }
  if (samples_.empty()) {
    throw EmptyInput("periodic function: no samples");
  }
  for (double v : samples_) {
    if (!std::isfinite(v)) throw InvalidParams("periodic function: non-finite sample");
  }
  const std::size_t n = samples_.size();
  spacing_ = period_ / static_cast<double>(n);
  cumulative_.resize(n + 1);
  cumulative_[0] = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumulative_[j + 1] = cumulative_[j] + 0.5 * spacing_ * (samples_[j] + node_value(j + 1));
  }
}

GridPosition PeriodicFunction::locate(double t) const {
  GridPosition pos;
  const double k = std::floor(t / period_);
  double tau = t - k * period_;
  if (tau < 0.0) tau = 0.0;
  if (tau > period_) tau = period_;
  pos.period_index = static_cast<long long>(k);
  auto cell = static_cast<std::size_t>(tau / spacing_);
  if (cell >= samples_.size()) cell = samples_.size() - 1;
  pos.cell = cell;
  pos.offset = tau - static_cast<double>(cell) * spacing_;
  return pos;
}

double PeriodicFunction::operator()(double t) const {
  const GridPosition pos = locate(t);
  const double f0 = samples_[pos.cell];
  const double f1 = node_value(pos.cell + 1);
  return f0 + (f1 - f0) * (pos.offset / spacing_);
}

double PeriodicFunction::cumulative(double t) const {
  const GridPosition pos = locate(t);
  const double f0 = samples_[pos.cell];
  const double f1 = node_value(pos.cell + 1);
  const double s = pos.offset;
  const double within = cumulative_[pos.cell] + f0 * s + (f1 - f0) * s * s / (2.0 * spacing_);
  return static_cast<double>(pos.period_index) * cumulative_.back() + within;
}

double PeriodicFunction::max_value() const {
  return *std::max_element(samples_.begin(), samples_.end());
}

double PeriodicFunction::min_value() const {
  return *std::min_element(samples_.begin(), samples_.end());
}

}  // namespace srk
