#include "srkit/ctmc.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "srkit/errors.hpp"

namespace srk {

namespace {

constexpr double kSymmetricTolerance = 1e-12;
// Sub-interval length is chosen so that (p + q) * length <= this, which keeps
// the exponential weight smooth enough for a 15-point Gauss rule.
constexpr double kMaxHazardPerPiece = 0.5;

double exp_neg(double x) { return std::exp(-x); }

}  // namespace

RatePair::RatePair(PeriodicFunction p, PeriodicFunction q) : p_(std::move(p)), q_(std::move(q)) {
  if (p_.size() != q_.size() || p_.period() != q_.period()) {
    throw InvalidParams("rate pair: p and q must share the same period grid");
  }
  if (p_.min_value() < 0.0 || q_.min_value() < 0.0) {
    throw InvalidParams("rate pair: rates must be nonnegative");
  }
  double max_diff = 0.0;
  for (std::size_t j = 0; j < p_.size(); ++j) {
    max_diff = std::max(max_diff, std::abs(p_.samples()[j] - q_.samples()[j]));
  }
  symmetric_ = max_diff < kSymmetricTolerance * p_.max_value() || max_diff == 0.0;
}

RatePair RatePair::from_table(const RateTable& table) {
  return RatePair(table.left_to_right(), table.right_to_left());
}

TwoStateChain::TwoStateChain(RatePair rates) : rates_(std::move(rates)) {
  log_g_period_ = rates_.p().period_integral() + rates_.q().period_integral();
  if (!std::isfinite(log_g_period_)) {
    throw NumericalOverflow("integral of p + q over one period is not representable");
  }
  if (!(log_g_period_ > 0.0)) {
    throw InvalidParams("p + q vanishes identically; the chain has no invariant measure");
  }
  const std::size_t n = rates_.p().size();
  const double h = rates_.p().spacing();
  jq_.assign(n + 1, 0.0);
  jp_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = static_cast<double>(k) * h;
    const double b = k + 1 == n ? period() : static_cast<double>(k + 1) * h;
    const double decay = exp_neg(log_g(b) - log_g(a));
    jq_[k + 1] = jq_[k] * decay + cell_integral(rates_.q(), a, b);
    jp_[k + 1] = jp_[k] * decay + cell_integral(rates_.p(), a, b);
  }
}

double TwoStateChain::log_g(double t) const {
  return rates_.p().cumulative(t) + rates_.q().cumulative(t);
}

double TwoStateChain::cell_integral(const PeriodicFunction& f, double from, double to) const {
  if (!(to > from)) return 0.0;
  const auto cell = rates_.p().locate(from).cell;
  const double hazard_max =
      std::max(rates_.p().node_value(cell) + rates_.q().node_value(cell),
               rates_.p().node_value(cell + 1) + rates_.q().node_value(cell + 1));
  const auto pieces =
      static_cast<std::size_t>(std::max(1.0, std::ceil(hazard_max * (to - from) / kMaxHazardPerPiece)));
  const double width = (to - from) / static_cast<double>(pieces);
  const double s_to = log_g(to);

  double total = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double a = from + static_cast<double>(i) * width;
    const double b = i + 1 == pieces ? to : a + width;
    const double s_b = log_g(b);
    const double inner = boost::math::quadrature::gauss<double, 15>::integrate(
        [&](double s) { return f(s) * std::exp(log_g(s) - s_b); }, a, b);
    total += inner * exp_neg(s_to - s_b);
  }
  return total;
}

double TwoStateChain::scaled_integral(const PeriodicFunction& f, const std::vector<double>& at_nodes,
                                      double tau) const {
  const std::size_t n = rates_.p().size();
  if (tau >= period()) return at_nodes[n];
  if (tau <= 0.0) return 0.0;
  const GridPosition pos = rates_.p().locate(tau);
  const double node = static_cast<double>(pos.cell) * rates_.p().spacing();
  return at_nodes[pos.cell] * exp_neg(log_g(tau) - log_g(node)) + cell_integral(f, node, tau);
}

double TwoStateChain::transient_component(const PeriodicFunction& f, const std::vector<double>& at_nodes,
                                          double initial, double t) const {
  // t = N T + tau. Periods i < N contribute J(T) exp(-(N-1-i) S_T - S(tau)).
  const double periods = std::floor(t / period());
  double tau = t - periods * period();
  if (tau < 0.0) tau = 0.0;
  const double s_tau = log_g(tau);
  const double decay = exp_neg(periods * log_g_period_ + s_tau);
  double geometric = 0.0;
  if (periods > 0.0) {
    geometric = std::expm1(-periods * log_g_period_) / std::expm1(-log_g_period_);
  }
  return initial * decay + scaled_integral(f, at_nodes, tau) +
         at_nodes.back() * exp_neg(s_tau) * geometric;
}

StateProbability TwoStateChain::transient(const StateProbability& nu0, double t) const {
  if (!(t >= 0.0)) throw InvalidParams(fmt::format("transient: t must be >= 0 (got {})", t));
  if (rates_.symmetric()) {
    const double envelope = std::exp(-2.0 * rates_.p().cumulative(t));
    const double half_gap = 0.5 * (nu0.nu_plus - nu0.nu_minus);
    return StateProbability::from_minus(t, 0.5 - half_gap * envelope);
  }
  const double minus = transient_component(rates_.q(), jq_, nu0.nu_minus, t);
  return StateProbability::from_minus(t, minus);
}

double TwoStateChain::transient_plus_from_p(const StateProbability& nu0, double t) const {
  return transient_component(rates_.p(), jp_, nu0.nu_plus, t);
}

double TwoStateChain::invariant_minus(double t) const {
  if (rates_.symmetric()) return 0.5;
  const double periods = std::floor(t / period());
  double tau = t - periods * period();
  if (tau < 0.0) tau = 0.0;
  return scaled_integral(rates_.q(), jq_, tau) +
         jq_.back() * exp_neg(log_g(tau)) / -std::expm1(-log_g_period_);
}

InvariantMeasure TwoStateChain::invariant_measure(std::size_t n_grid) const {
  if (n_grid == 0) throw InvalidParams("invariant measure needs at least one grid point");
  InvariantMeasure out;
  out.period = period();
  out.grid.resize(n_grid);
  out.nu_minus_bar.resize(n_grid);
  out.nu_plus_bar.resize(n_grid);
  for (std::size_t j = 0; j < n_grid; ++j) {
    const double t = static_cast<double>(j) * period() / static_cast<double>(n_grid);
    out.grid[j] = t;
    out.nu_minus_bar[j] = invariant_minus(t);
    out.nu_plus_bar[j] = 1.0 - out.nu_minus_bar[j];
  }
  return out;
}

double TwoStateChain::relaxation_time(const StateProbability& nu0) const {
  // nu_-(t) - nu_bar_-(t) = (nu_-(0) - nu_bar_-(0)) exp(-S(t)); S is nondecreasing.
  const double gap = std::abs(nu0.nu_minus - invariant_minus(0.0));
  const double threshold = std::exp(-1.0);
  if (gap <= threshold) return 0.0;
  const double target = 1.0 + std::log(gap);

  const double periods = std::floor(target / log_g_period_);
  const double residual = target - periods * log_g_period_;
  double lo = 0.0;
  double hi = period();
  if (log_g(lo) >= residual) return periods * period();
  for (int it = 0; it < 200 && hi - lo > 1e-15 * period(); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (log_g(mid) >= residual) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return periods * period() + hi;
}

StateProbability transient(const RatePair& rates, const StateProbability& nu0, double t) {
  return TwoStateChain(rates).transient(nu0, t);
}

InvariantMeasure invariant_measure(const RatePair& rates, std::size_t n_grid) {
  return TwoStateChain(rates).invariant_measure(n_grid);
}

double relaxation_time(const RatePair& rates, const StateProbability& nu0) {
  return TwoStateChain(rates).relaxation_time(nu0);
}

}  // namespace srk
