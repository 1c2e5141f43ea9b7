#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "srkit/kramers.hpp"
#include "srkit/reduction.hpp"

namespace srk {

enum class Direction { LeftToRight, RightToLeft };

Direction direction_from(Well well);

/// Hazard level at which the survival function is treated as zero.
inline constexpr double kHazardTruncation = 40.0;

/// Distribution of the exit time t of a sojourn entered at u, with escape rate
/// R(t) taken from a rate table:
///   pdf(t) = R(t) exp(-H(u, t)),  cdf(t) = 1 - exp(-H(u, t)),  H(u, t) = int_u^t R.
class ConditionalEscapeDist {
 public:
  ConditionalEscapeDist(const RateTable& table, Direction direction, double u);
  ConditionalEscapeDist(RateTable&&, Direction, double) = delete;  // keeps a pointer into the table

  Direction direction() const { return direction_; }
  double u() const { return u_; }
  const PeriodicFunction& rate() const { return *rate_; }

  double hazard(double t) const;
  double pdf(double t) const;
  double cdf(double t) const;

  /// Exit time at cumulative probability `p` (inverse CDF). Probabilities whose
  /// hazard exceeds kHazardTruncation are capped there.
  double quantile(double p) const;

  /// Exit time at which the hazard reaches kHazardTruncation.
  double truncation_time() const { return quantile_hazard(kHazardTruncation); }

 private:
  double quantile_hazard(double h) const;

  const PeriodicFunction* rate_;
  Direction direction_;
  double u_;
  double cum_u_;
};

double conditional_pdf(const ConditionalEscapeDist& dist, double t);
double conditional_cdf(const ConditionalEscapeDist& dist, double t);

/// Every sojourn starts at a phase where entrance is most likely; reduces the
/// total density to p_+(t, 0).
struct PerfectPhase {};

/// Weighted entrance times for each well (times are taken modulo T).
struct EmpiricalPhases {
  std::vector<double> left_u;
  std::vector<double> left_w;
  std::vector<double> right_u;
  std::vector<double> right_w;
};

/// Entrance densities m_-(u), m_+(u) tabulated at u_j = j T / n, j = 0..n
/// (both endpoints). Each must be nonnegative and integrate to 1 over the
/// period under the trapezoid rule.
struct GridDensity {
  double period = 0.0;
  std::vector<double> m_minus;
  std::vector<double> m_plus;

  void validate() const;
};

using EntrancePhaseModel = std::variant<PerfectPhase, EmpiricalPhases, GridDensity>;

/// Empirical entrance model built from escape records, unit weight each.
EmpiricalPhases empirical_phases(std::span<const EscapeRecord> records);

/// Density of escape durations
///   p_tot(t) = 1/2 int_0^T p_-(t + u, u) m_-(u) + p_+(t + u, u) m_+(u) du.
double total_pdf(const RateTable& table, const EntrancePhaseModel& model, double duration);

struct ScatterPoint {
  double phase_in = 0.0;
  double phase_escape = 0.0;
  Well well = Well::Left;
};

struct EscapeHistogram {
  double period = 0.0;
  double bin_width = 0.05;  ///< in units of T
  std::vector<std::size_t> counts;
  std::size_t n = 0;
  std::vector<ScatterPoint> scatter;

  double bin_start(std::size_t j) const { return static_cast<double>(j) * bin_width; }
  double bin_end(std::size_t j) const { return static_cast<double>(j + 1) * bin_width; }
  /// Normalised so that the histogram integrates to 1 over duration / T.
  double density(std::size_t j) const;
};

/// Bins durations / T. Throws EmptyInput on no records.
EscapeHistogram histogram(std::span<const EscapeRecord> records, double period, double bin_width = 0.05);

}  // namespace srk
