#include "srkit/folding.hpp"

#include <algorithm>
#include <cmath>

#include "srkit/errors.hpp"

namespace srk {

PhaseFolder::PhaseFolder(double period, std::size_t n_bins)
    : period_(period), sums_(n_bins, 0.0), weights_(n_bins, 0.0) {
  if (!(period > 0.0)) throw InvalidParams("phase folder: period must be positive");
  if (n_bins == 0) throw InvalidParams("phase folder: need at least one bin");
}

std::size_t PhaseFolder::bin_of(double t) const {
  double tau = t - std::floor(t / period_) * period_;
  auto j = static_cast<std::size_t>(tau / period_ * static_cast<double>(sums_.size()));
  return std::min(j, sums_.size() - 1);
}

void PhaseFolder::add_sample(double t, double value, double weight) {
  const std::size_t j = bin_of(t);
  sums_[j] += weight * value;
  weights_[j] += weight;
}

void PhaseFolder::add_interval(double from, double to, double value) {
  if (!(to > from)) return;
  const double width = period_ / static_cast<double>(sums_.size());
  // Walk bin boundaries in absolute time.
  double cursor = from;
  auto index = static_cast<long long>(std::floor(from / width));
  while (cursor < to) {
    const double edge = std::min(to, static_cast<double>(index + 1) * width);
    const double span = edge - cursor;
    if (span > 0.0) {
      const long long n = static_cast<long long>(sums_.size());
      const auto j = static_cast<std::size_t>(((index % n) + n) % n);
      sums_[j] += span * value;
      weights_[j] += span;
    }
    cursor = edge;
    ++index;
  }
}

void PhaseFolder::merge(const PhaseFolder& other) {
  if (other.sums_.size() != sums_.size() || other.period_ != period_) {
    throw InvalidParams("phase folder: cannot merge folders with different binning");
  }
  for (std::size_t j = 0; j < sums_.size(); ++j) {
    sums_[j] += other.sums_[j];
    weights_[j] += other.weights_[j];
  }
}

PhaseFoldedSignal PhaseFolder::result() const {
  PhaseFoldedSignal out;
  out.period = period_;
  out.values.resize(sums_.size());
  out.weights = weights_;
  for (std::size_t j = 0; j < sums_.size(); ++j) {
    out.values[j] = weights_[j] > 0.0 ? sums_[j] / weights_[j] : 0.0;
  }
  return out;
}

PhaseFoldedSignal combine(std::span<const PhaseFoldedSignal> signals) {
  if (signals.empty()) throw EmptyInput("combine: no folded signals");
  const PhaseFoldedSignal& first = signals.front();
  std::vector<double> sums(first.size(), 0.0);
  std::vector<double> weights(first.size(), 0.0);
  for (const auto& s : signals) {
    if (s.size() != first.size() || s.period != first.period) {
      throw InvalidParams("combine: folded signals have different binning");
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
      sums[j] += s.values[j] * s.weights[j];
      weights[j] += s.weights[j];
    }
  }
  PhaseFoldedSignal out;
  out.period = first.period;
  out.values.resize(first.size());
  for (std::size_t j = 0; j < first.size(); ++j) {
    out.values[j] = weights[j] > 0.0 ? sums[j] / weights[j] : 0.0;
  }
  out.weights = std::move(weights);
  return out;
}

}  // namespace srk
