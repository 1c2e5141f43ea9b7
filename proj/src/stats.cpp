#include "srkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "srkit/errors.hpp"
#include "srkit/escape.hpp"

namespace srk {

double kolmogorov_cdf(double x) {
  if (!(x > 0.0)) return 0.0;
  double q = 0.0;
  if (x < 1.18) {
    // Q(x) = sqrt(2 pi)/x sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))
    const double a = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * a);
      sum += term;
      if (term < 1e-17) break;
    }
    q = std::sqrt(2.0 * std::numbers::pi) / x * sum;
  } else {
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * x * x);
      sum += (k % 2 == 1) ? term : -term;
      if (term < 1e-12) break;
    }
    q = 1.0 - 2.0 * sum;
  }
  return std::clamp(q, 0.0, 1.0);
}

namespace {

KSResult finish(std::vector<double> z) {
  std::sort(z.begin(), z.end());
  const auto n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - z[i];
    const double below = z[i] - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  KSResult r;
  r.n = z.size();
  r.statistic = std::clamp(d, 0.0, 1.0);
  r.scaled = std::sqrt(n) * r.statistic;
  r.q_value = kolmogorov_cdf(r.scaled);
  r.accepted_99 = r.scaled <= kKsThreshold99;
  return r;
}

void check_unit(double v, std::size_t i) {
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidCDFValue(fmt::format("value {} at index {} is outside [0, 1]", v, i));
}

}  // namespace

KSResult ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw EmptyInput("KS statistic of an empty sample");
  std::vector<double> z(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    z[i] = cdf(samples[i]);
    check_unit(z[i], i);
  }
  return finish(std::move(z));
}

KSResult ks_uniform(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("KS statistic of an empty sample");
  for (std::size_t i = 0; i < values.size(); ++i) check_unit(values[i], i);
  return finish(std::vector<double>(values.begin(), values.end()));
}

KSResult conditional_ks(std::span<const EscapePair> pairs, const std::function<double(double, double)>& cond_cdf,
                        std::vector<double>* transformed) {
  if (pairs.empty()) throw EmptyInput("conditional KS needs at least one escape");
  std::vector<double> v(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    v[i] = cond_cdf(pairs[i].u, pairs[i].t);
    check_unit(v[i], i);
  }
  if (transformed) *transformed = v;
  return finish(std::move(v));
}

WellKS conditional_ks_by_well(std::span<const EscapeRecord> records, const RateTable& table) {
  std::vector<EscapePair> left;
  std::vector<EscapePair> right;
  for (const auto& r : records) (r.well == Well::Left ? left : right).push_back({r.u, r.t});
  auto cdf_for = [&](Direction d) {
    return [&table, d](double u, double t) { return ConditionalEscapeDist(table, d, u).cdf(t); };
  };
  WellKS out;
  if (!left.empty()) out.left = conditional_ks(left, cdf_for(Direction::LeftToRight), &out.left_values);
  if (!right.empty()) out.right = conditional_ks(right, cdf_for(Direction::RightToLeft), &out.right_values);
  return out;
}

std::vector<std::pair<double, double>> ks_staircase(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  for (std::size_t i = 0; i < v.size(); ++i) check_unit(v[i], i);
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(2 * v.size() + 2);
  out.emplace_back(0.0, 0.0);
  const auto n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.emplace_back(v[i], static_cast<double>(i) / n);
    out.emplace_back(v[i], static_cast<double>(i + 1) / n);
  }
  out.emplace_back(1.0, v.empty() ? 0.0 : 1.0);
  return out;
}

}  // namespace srk
