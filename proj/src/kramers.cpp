#include "srkit/kramers.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "srkit/errors.hpp"
#include "srkit/parallel.hpp"

namespace srk {

std::string_view to_string(Well well) { return well == Well::Left ? "left" : "right"; }

namespace {

constexpr double kMinDeterminant = 1e-12;

void check_determinant(const CriticalPoint& p, std::string_view label) {
  if (std::abs(p.hessian_det) < kMinDeterminant) {
    throw DegenerateHessian(
        fmt::format("Hessian determinant at {} is {} (below {})", label, p.hessian_det, kMinDeterminant));
  }
}

}  // namespace

EscapeRate static_rate(const CriticalSet& critical_set, Well from, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidParams(fmt::format("epsilon must be positive (got {})", epsilon));

  const CriticalPoint& well = from == Well::Left ? critical_set.well_left : critical_set.well_right;
  check_determinant(well, from == Well::Left ? "well_left" : "well_right");

  // log( sqrt|det H_well| / 2 pi )
  const double log_well = 0.5 * std::log(std::abs(well.hessian_det)) - std::log(2.0 * std::numbers::pi);

  EscapeRate out;
  out.epsilon = epsilon;
  const std::array<std::pair<std::string_view, const CriticalPoint*>, 2> saddles = {
      {{"saddle_upper", &critical_set.saddle_upper}, {"saddle_lower", &critical_set.saddle_lower}}};

  double max_log = -INFINITY;
  for (std::size_t i = 0; i < saddles.size(); ++i) {
    const auto& [label, saddle] = saddles[i];
    check_determinant(*saddle, label);
    SaddleTerm term;
    term.label = label;
    term.delta_v = saddle->value - well.value;
    if (!(term.delta_v > 0.0)) {
      throw TopologyChange(fmt::format("{} lies below the {} well (dV = {})", label, to_string(from),
                                       term.delta_v));
    }
    const double log_k =
        log_well + std::log(std::abs(saddle->lambda_min)) - 0.5 * std::log(std::abs(saddle->hessian_det));
    term.coefficient = std::exp(log_k);
    term.log_rate = log_k - 2.0 * term.delta_v / (epsilon * epsilon);
    term.rate = std::exp(term.log_rate);
    out.per_saddle[i] = term;
    max_log = std::max(max_log, term.log_rate);
  }

  double scaled = 0.0;
  for (const auto& term : out.per_saddle) scaled += std::exp(term.log_rate - max_log);
  out.log_total = max_log + std::log(scaled);
  out.total = std::exp(out.log_total);
  return out;
}

RateTable::RateTable(double period, std::vector<double> rates_lr, std::vector<double> rates_rl) {
  if (rates_lr.size() != rates_rl.size()) {
    throw InvalidParams("rate table: left-to-right and right-to-left grids differ in size");
  }
  for (std::size_t j = 0; j < rates_lr.size(); ++j) {
    if (!(rates_lr[j] >= 0.0) || !(rates_rl[j] >= 0.0) || !std::isfinite(rates_lr[j]) ||
        !std::isfinite(rates_rl[j])) {
      throw InvalidParams(fmt::format("rate table: entry {} is negative or not finite", j));
    }
  }
  lr_ = PeriodicFunction(period, std::move(rates_lr));
  rl_ = PeriodicFunction(period, std::move(rates_rl));
}

std::vector<double> RateTable::phases() const {
  std::vector<double> out(size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = lr_.node_time(j);
  return out;
}

RateTable adiabatic_rate_table(const ModelParams& params, const Forcing& forcing, double epsilon,
                               std::size_t n_phase, unsigned threads) {
  params.validate();
  forcing.validate();
  if (n_phase < 2) throw InvalidParams("rate table needs at least two phases");

  const double period = forcing.period();
  std::vector<double> lr(n_phase);
  std::vector<double> rl(n_phase);
  parallel_for(
      n_phase,
      [&](std::size_t j) {
        const double t = static_cast<double>(j) * period / static_cast<double>(n_phase);
        const CriticalSet set = find_critical_points_at(params, forcing, t);
        lr[j] = static_rate(set, Well::Left, epsilon).total;
        rl[j] = static_rate(set, Well::Right, epsilon).total;
      },
      threads);
  return RateTable(period, std::move(lr), std::move(rl));
}

}  // namespace srk
