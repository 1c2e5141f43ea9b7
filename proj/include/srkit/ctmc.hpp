#pragma once

#include <cstddef>
#include <vector>

#include "srkit/kramers.hpp"
#include "srkit/periodic.hpp"

namespace srk {

/// Escape rates of the two-state chain: p out of state -1, q out of state +1.
class RatePair {
 public:
  RatePair(PeriodicFunction p, PeriodicFunction q);
  /// p = R_{-1+1}, q = R_{+1-1}.
  static RatePair from_table(const RateTable& table);

  const PeriodicFunction& p() const { return p_; }
  const PeriodicFunction& q() const { return q_; }
  double period() const { return p_.period(); }

  /// True when max|p - q| < 1e-12 max(p) on the grid.
  bool symmetric() const { return symmetric_; }

 private:
  PeriodicFunction p_;
  PeriodicFunction q_;
  bool symmetric_ = false;
};

struct StateProbability {
  double t = 0.0;
  double nu_minus = 0.5;
  double nu_plus = 0.5;

  static StateProbability from_minus(double t, double nu_minus) {
    return {t, nu_minus, 1.0 - nu_minus};
  }
};

struct InvariantMeasure {
  double period = 0.0;
  std::vector<double> grid;  ///< t_j = j T / n, j = 0..n-1
  std::vector<double> nu_minus_bar;
  std::vector<double> nu_plus_bar;
};

/// Closed-form state probabilities of the periodically driven two-state chain.
/// All exponentials of the accumulated rate integral are formed as ratios
/// exp(S(s) - S(t)), so nothing overflows for long periods or large rates.
class TwoStateChain {
 public:
  /// Throws NumericalOverflow if the period integral of p + q is not finite,
  /// InvalidParams if it vanishes.
  explicit TwoStateChain(RatePair rates);

  const RatePair& rates() const { return rates_; }
  double period() const { return rates_.period(); }

  /// S(t) = integral of p + q over [0, t].
  double log_g(double t) const;

  StateProbability transient(const StateProbability& nu0, double t) const;

  double invariant_minus(double t) const;
  StateProbability invariant(double t) const { return StateProbability::from_minus(t, invariant_minus(t)); }
  InvariantMeasure invariant_measure(std::size_t n_grid) const;

  /// First t with |nu_bar_-(t) - nu_-(t)| <= 1/e.
  double relaxation_time(const StateProbability& nu0) const;

  /// nu_+(t) from the p-integral form; equals 1 - transient().nu_minus.
  double transient_plus_from_p(const StateProbability& nu0, double t) const;

 private:
  // Returns J_f(tau) = integral_0^tau f(s) exp(S(s) - S(tau)) ds for tau in [0, T].
  double scaled_integral(const PeriodicFunction& f, const std::vector<double>& at_nodes, double tau) const;
  double cell_integral(const PeriodicFunction& f, double from, double to) const;
  double transient_component(const PeriodicFunction& f, const std::vector<double>& at_nodes,
                             double initial, double t) const;

  RatePair rates_;
  double log_g_period_ = 0.0;
  std::vector<double> jq_;  // J_q at grid nodes 0..n
  std::vector<double> jp_;  // J_p at grid nodes 0..n
};

StateProbability transient(const RatePair& rates, const StateProbability& nu0, double t);
InvariantMeasure invariant_measure(const RatePair& rates, std::size_t n_grid);
double relaxation_time(const RatePair& rates, const StateProbability& nu0);

}  // namespace srk
