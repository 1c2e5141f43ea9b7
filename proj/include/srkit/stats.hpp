#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "srkit/kramers.hpp"
#include "srkit/reduction.hpp"

namespace srk {

/// Acceptance threshold for sqrt(n) D_n at the 99% level used throughout.
inline constexpr double kKsThreshold99 = 1.6920;

struct KSResult {
  std::size_t n = 0;
  double statistic = 0.0;  ///< D_n
  double scaled = 0.0;     ///< sqrt(n) D_n
  double q_value = 0.0;    ///< Q(sqrt(n) D_n), asymptotic
  bool accepted_99 = false;
};

/// Kolmogorov limiting CDF Q(x) = 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
/// Small x uses the equivalent Jacobi theta form, where the alternating series
/// converges slowly.
double kolmogorov_cdf(double x);

/// One-sample KS statistic of `samples` against `cdf`. Throws EmptyInput.
KSResult ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// KS statistic of values in [0, 1] against the uniform CDF. Throws EmptyInput
/// and InvalidCDFValue.
KSResult ks_uniform(std::span<const double> values);

struct EscapePair {
  double u = 0.0;
  double t = 0.0;
};

/// Conditional KS statistic: v_i = cdf(u_i, t_i) tested for uniformity.
/// Optionally returns the transformed values.
KSResult conditional_ks(std::span<const EscapePair> pairs, const std::function<double(double, double)>& cond_cdf,
                        std::vector<double>* transformed = nullptr);

struct WellKS {
  std::optional<KSResult> left;   ///< S_n^- against F^-_u
  std::optional<KSResult> right;  ///< S_n^+ against F^+_u
  std::vector<double> left_values;
  std::vector<double> right_values;
};

/// Runs conditional_ks separately over Left and Right records using the
/// direction-matched rate. A well without records yields no result.
WellKS conditional_ks_by_well(std::span<const EscapeRecord> records, const RateTable& table);

/// Empirical CDF staircase of values in [0, 1] as (x, fraction <= x) corners,
/// starting at (0, 0) and ending at (1, 1).
std::vector<std::pair<double, double>> ks_staircase(std::span<const double> values);

}  // namespace srk
