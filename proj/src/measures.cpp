#include "srkit/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "srkit/errors.hpp"

namespace srk {

namespace {

void require_path(const SymbolicPath& path) {
  if (path.empty()) throw EmptyInput("symbolic path has no segments");
}

}  // namespace

PhaseFoldedSignal fold_chain(const SymbolicPath& path, double period, std::size_t n_bins, double t_start) {
  require_path(path);
  PhaseFolder folder(period, n_bins);
  for (const auto& s : path.segments) {
    folder.add_interval(std::max(s.start, t_start), s.end, static_cast<double>(static_cast<int>(s.state)));
  }
  return folder.result();
}

PhaseFoldedSignal out_of_phase_chain(const SymbolicPath& path, double period, std::size_t n_bins,
                                     double t_start) {
  require_path(path);
  PhaseFolder folder(period, n_bins);
  const double half = 0.5 * period;
  for (const auto& s : path.segments) {
    double from = std::max(s.start, t_start);
    if (!(from < s.end)) continue;
    // Step an integer half-period index; recomputing floor(from / half) after a
    // split can round back to the previous index and stall.
    auto k = static_cast<long long>(std::floor(from / half));
    if (static_cast<double>(k + 1) * half <= from) ++k;
    const bool up = s.state == ChainState::Right;
    while (from < s.end) {
      const double to = std::min(s.end, static_cast<double>(k + 1) * half);
      const bool first_half = k % 2 == 0;
      if (to > from) folder.add_interval(from, to, up == first_half ? 1.0 : 0.0);
      from = to;
      ++k;
    }
  }
  return folder.result();
}

double linear_response(const PhaseFoldedSignal& signal) {
  const std::size_t n = signal.size();
  if (n == 0) throw EmptyInput("linear response of an empty signal");
  double re = 0.0;
  double im = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    re += signal.values[j] * std::cos(angle);
    im -= signal.values[j] * std::sin(angle);
  }
  return std::hypot(re, im) / static_cast<double>(n);
}

namespace {

void check_scale(double forcing, double epsilon) {
  if (!(forcing > 0.0)) throw InvalidParams(fmt::format("forcing magnitude must be positive (got {})", forcing));
  if (!(epsilon > 0.0)) throw InvalidParams(fmt::format("epsilon must be positive (got {})", epsilon));
}

double smallest_positive(std::span<const double> v, const char* name) {
  double best = 0.0;
  for (double x : v) {
    if (x > 0.0 && (best == 0.0 || x < best)) best = x;
  }
  if (best == 0.0) throw DegenerateInvariantMeasure(fmt::format("{} has no positive values", name));
  return best;
}

}  // namespace

SixMeasures six_measures(const PhaseFoldedSignal& mean_y, const PhaseFoldedSignal& mean_ybar,
                         std::span<const double> nu_minus, std::span<const double> nu_plus, double forcing,
                         double epsilon) {
  check_scale(forcing, epsilon);
  const std::size_t n = mean_y.size();
  if (n == 0) throw EmptyInput("six measures of an empty signal");
  if (mean_ybar.size() != n || nu_minus.size() != n || nu_plus.size() != n) {
    throw InvalidParams("six measures: inputs must share one grid");
  }
  const double dt = mean_y.period / static_cast<double>(n);
  const double lim_minus = smallest_positive(nu_minus, "nu_minus");
  const double lim_plus = smallest_positive(nu_plus, "nu_plus");

  SixMeasures m;
  const double y_lin = linear_response(mean_y);
  m.m1 = y_lin / forcing;
  m.m2 = y_lin / (epsilon * forcing);
  for (std::size_t j = 0; j < n; ++j) {
    m.m3 += dt * mean_y.values[j] * mean_y.values[j];
    m.m4 += dt * mean_ybar.values[j];
    // First half of the period weighs nu_-, second half nu_+.
    const bool first_half = 2 * j < n;
    const double nu = first_half ? nu_minus[j] : nu_plus[j];
    if (nu > 0.0) {
      m.m5 -= dt * std::log(nu);
    } else {
      m.m5 -= dt * std::log(first_half ? lim_minus : lim_plus);
      m.floor_used = true;
    }
    if (nu_minus[j] > 0.0) m.m6 -= dt * nu_minus[j] * std::log(nu_minus[j]);
    if (nu_plus[j] > 0.0) m.m6 -= dt * nu_plus[j] * std::log(nu_plus[j]);
  }
  return m;
}

SixMeasures six_measures(const PhaseFoldedSignal& mean_y, const PhaseFoldedSignal& mean_ybar,
                         const InvariantMeasure& nu, double forcing, double epsilon) {
  return six_measures(mean_y, mean_ybar, nu.nu_minus_bar, nu.nu_plus_bar, forcing, epsilon);
}

SixMeasures diffusion_measures(const PhaseFoldedSignal& mean_x, double forcing, double epsilon) {
  check_scale(forcing, epsilon);
  SixMeasures m;
  m.chain = false;
  const double x_lin = linear_response(mean_x);
  m.m1 = x_lin / forcing;
  m.m2 = x_lin / (epsilon * forcing);
  return m;
}

InvariantMeasure occupancy_measure(const PhaseFoldedSignal& mean_y) {
  InvariantMeasure nu;
  nu.period = mean_y.period;
  const std::size_t n = mean_y.size();
  nu.grid.resize(n);
  nu.nu_minus_bar.resize(n);
  nu.nu_plus_bar.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    nu.grid[j] = mean_y.bin_start(j);
    nu.nu_minus_bar[j] = 0.5 * (1.0 - mean_y.values[j]);
    nu.nu_plus_bar[j] = 0.5 * (1.0 + mean_y.values[j]);
  }
  return nu;
}

ChainNoise chain_noise(std::span<const PhaseFoldedSignal> per_realization_y, double forcing) {
  if (!(forcing > 0.0)) throw InvalidParams("forcing magnitude must be positive");
  const std::size_t r = per_realization_y.size();
  if (r < 2) throw EmptyInput("chain noise needs at least two realizations");
  const std::size_t n = per_realization_y.front().size();
  const double period = per_realization_y.front().period;
  const double dt = period / static_cast<double>(n);
  const double rd = static_cast<double>(r);

  std::vector<double> re(r, 0.0);
  std::vector<double> im(r, 0.0);
  std::vector<double> sum(n, 0.0);
  std::vector<double> sum_sq(n, 0.0);
  for (std::size_t k = 0; k < r; ++k) {
    const auto& s = per_realization_y[k];
    if (s.size() != n) throw InvalidParams("chain noise: folds have different binning");
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      re[k] += s.values[j] * std::cos(angle) / static_cast<double>(n);
      im[k] -= s.values[j] * std::sin(angle) / static_cast<double>(n);
      sum[j] += s.values[j];
      sum_sq[j] += s.values[j] * s.values[j];
    }
  }
  auto variance = [&](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= rd;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return ss / (rd - 1.0);
  };
  ChainNoise out;
  out.n = r;
  out.m1_standard_error = std::sqrt((variance(re) + variance(im)) / rd) / forcing;
  for (std::size_t j = 0; j < n; ++j) {
    const double mean = sum[j] / rd;
    const double var = std::max(0.0, (sum_sq[j] - rd * mean * mean) / (rd - 1.0));
    out.m3_noise_scale += dt * var / rd;
  }
  return out;
}

}  // namespace srk
