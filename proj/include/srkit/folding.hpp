#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace srk {

/// Ensemble mean of a signal folded onto one forcing period: bin j covers
/// [j T/N, (j+1) T/N). `weights` holds the amount of data behind each bin
/// (sample count or covered time, depending on the producer).
struct PhaseFoldedSignal {
  double period = 0.0;
  std::vector<double> values;
  std::vector<double> weights;

  std::size_t size() const { return values.size(); }
  double bin_width() const { return period / static_cast<double>(values.size()); }
  double bin_start(std::size_t j) const { return static_cast<double>(j) * bin_width(); }
};

/// Accumulates weighted values into phase bins.
class PhaseFolder {
 public:
  PhaseFolder(double period, std::size_t n_bins);

  double period() const { return period_; }
  std::size_t n_bins() const { return sums_.size(); }

  std::size_t bin_of(double t) const;

  /// Adds one sample taken at time t.
  void add_sample(double t, double value, double weight = 1.0);

  /// Adds a piecewise-constant signal equal to `value` on [from, to), splitting
  /// the time weight across the bins it overlaps.
  void add_interval(double from, double to, double value);

  /// Merges another folder with the same binning.
  void merge(const PhaseFolder& other);

  /// Bins without data get value 0 and weight 0.
  PhaseFoldedSignal result() const;

 private:
  double period_;
  std::vector<double> sums_;
  std::vector<double> weights_;
};

/// Weighted average of several folded signals with identical binning.
PhaseFoldedSignal combine(std::span<const PhaseFoldedSignal> signals);

}  // namespace srk
