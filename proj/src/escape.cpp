#include "srkit/escape.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "srkit/errors.hpp"

namespace srk {

Direction direction_from(Well well) {
  return well == Well::Left ? Direction::LeftToRight : Direction::RightToLeft;
}

ConditionalEscapeDist::ConditionalEscapeDist(const RateTable& table, Direction direction, double u)
    : rate_(direction == Direction::LeftToRight ? &table.left_to_right() : &table.right_to_left()),
      direction_(direction),
      u_(u),
      cum_u_(rate_->cumulative(u)) {
  if (!std::isfinite(u)) throw InvalidParams("entrance time must be finite");
}

double ConditionalEscapeDist::hazard(double t) const {
  if (t <= u_) return 0.0;
  return rate_->cumulative(t) - cum_u_;
}

double ConditionalEscapeDist::pdf(double t) const {
  if (t < u_) return 0.0;
  return (*rate_)(t)*std::exp(-hazard(t));
}

double ConditionalEscapeDist::cdf(double t) const { return -std::expm1(-hazard(t)); }

double ConditionalEscapeDist::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParams(fmt::format("probability {} outside [0, 1]", p));
  const double h = p >= 1.0 ? kHazardTruncation : std::min(kHazardTruncation, -std::log1p(-p));
  return quantile_hazard(h);
}

double ConditionalEscapeDist::quantile_hazard(double h) const {
  if (h <= 0.0) return u_;
  const double per_period = rate_->period_integral();
  if (!(per_period > 0.0)) throw InvalidParams("escape rate vanishes identically");
  const double period = rate_->period();
  const double target = cum_u_ + h;
  // Bracket by whole periods, then bisect the monotone cumulative hazard.
  const double k = std::floor(target / per_period);
  double lo = std::max(u_, k * period);
  double hi = std::max(lo, (k + 1.0) * period);
  while (rate_->cumulative(hi) < target) hi += period;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rate_->cumulative(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double conditional_pdf(const ConditionalEscapeDist& dist, double t) { return dist.pdf(t); }
double conditional_cdf(const ConditionalEscapeDist& dist, double t) { return dist.cdf(t); }

void GridDensity::validate() const {
  if (!(period > 0.0)) throw InvalidParams("grid density needs a positive period");
  auto check = [&](const std::vector<double>& m, const char* name) {
    if (m.size() < 2) throw InvalidParams(fmt::format("{} needs at least two nodes", name));
    double mass = 0.0;
    const double h = period / static_cast<double>(m.size() - 1);
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!(m[j] >= 0.0) || !std::isfinite(m[j])) {
        throw InvalidParams(fmt::format("{} is negative or not finite at node {}", name, j));
      }
      mass += (j == 0 || j + 1 == m.size() ? 0.5 : 1.0) * h * m[j];
    }
    if (std::abs(mass - 1.0) > 1e-6) throw InvalidParams(fmt::format("{} integrates to {}, not 1", name, mass));
  };
  check(m_minus, "m_minus");
  check(m_plus, "m_plus");
  if (m_minus.size() != m_plus.size()) throw InvalidParams("m_minus and m_plus need the same grid");
}

EmpiricalPhases empirical_phases(std::span<const EscapeRecord> records) {
  EmpiricalPhases out;
  for (const auto& r : records) {
    if (r.well == Well::Left) {
      out.left_u.push_back(r.u);
      out.left_w.push_back(1.0);
    } else {
      out.right_u.push_back(r.u);
      out.right_w.push_back(1.0);
    }
  }
  return out;
}

namespace {

double sojourn_pdf(const RateTable& table, Direction d, double u, double duration) {
  return ConditionalEscapeDist(table, d, u).pdf(u + duration);
}

double weight_total(const std::vector<double>& us, const std::vector<double>& ws) {
  if (us.size() != ws.size()) throw InvalidParams("entrance times and weights differ in length");
  double total = 0.0;
  for (double w : ws) {
    if (!(w >= 0.0)) throw InvalidParams("entrance weights must be nonnegative");
    total += w;
  }
  return total;
}

}  // namespace

double total_pdf(const RateTable& table, const EntrancePhaseModel& model, double duration) {
  if (duration < 0.0) return 0.0;
  const double period = table.period();
  if (std::holds_alternative<PerfectPhase>(model)) {
    return sojourn_pdf(table, Direction::RightToLeft, 0.0, duration);
  }
  if (const auto* grid = std::get_if<GridDensity>(&model)) {
    grid->validate();
    const std::size_t n = grid->m_minus.size() - 1;
    const double h = grid->period / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      const double u = static_cast<double>(j) * h;
      const double w = (j == 0 || j == n ? 0.5 : 1.0) * h;
      double term = 0.0;
      if (grid->m_minus[j] > 0.0) term += sojourn_pdf(table, Direction::LeftToRight, u, duration) * grid->m_minus[j];
      if (grid->m_plus[j] > 0.0) term += sojourn_pdf(table, Direction::RightToLeft, u, duration) * grid->m_plus[j];
      sum += w * term;
    }
    return 0.5 * sum;
  }
  const auto& emp = std::get<EmpiricalPhases>(model);
  auto side = [&](Direction d, const std::vector<double>& us, const std::vector<double>& ws) {
    const double total = weight_total(us, ws);
    if (!(total > 0.0)) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < us.size(); ++i) {
      if (ws[i] == 0.0) continue;
      const double u = us[i] - std::floor(us[i] / period) * period;
      sum += ws[i] * sojourn_pdf(table, d, u, duration);
    }
    return sum / total;
  };
  const double left = side(Direction::LeftToRight, emp.left_u, emp.left_w);
  const double right = side(Direction::RightToLeft, emp.right_u, emp.right_w);
  const bool has_left = !emp.left_u.empty();
  const bool has_right = !emp.right_u.empty();
  if (!has_left && !has_right) throw EmptyInput("empirical entrance model has no entrance times");
  // A well without entrances contributes no mass; the other carries it all.
  if (!has_left) return right;
  if (!has_right) return left;
  return 0.5 * (left + right);
}

double EscapeHistogram::density(std::size_t j) const {
  if (n == 0) return 0.0;
  return static_cast<double>(counts[j]) / (static_cast<double>(n) * bin_width);
}

EscapeHistogram histogram(std::span<const EscapeRecord> records, double period, double bin_width) {
  if (records.empty()) throw EmptyInput("no escape records to bin");
  if (!(period > 0.0)) throw InvalidParams("histogram needs a positive period");
  if (!(bin_width > 0.0)) throw InvalidParams("histogram bin width must be positive");
  EscapeHistogram out;
  out.period = period;
  out.bin_width = bin_width;
  out.n = records.size();
  out.scatter.reserve(records.size());
  for (const auto& r : records) {
    const double d = r.duration() / period;
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvalidParams(fmt::format("invalid escape duration {}", r.duration()));
    const auto j = static_cast<std::size_t>(std::floor(d / bin_width));
    if (j >= out.counts.size()) out.counts.resize(j + 1, 0);
    ++out.counts[j];
    out.scatter.push_back({r.phase_in(period), r.phase_escape(period), r.well});
  }
  return out;
}

}  // namespace srk
