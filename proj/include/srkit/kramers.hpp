#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "srkit/periodic.hpp"
#include "srkit/potential.hpp"

namespace srk {

enum class Well { Left, Right };

std::string_view to_string(Well well);

struct SaddleTerm {
  std::string_view label;
  double delta_v = 0.0;      ///< V(saddle) - V(well)
  double coefficient = 0.0;  ///< Kramers prefactor k_i
  double log_rate = 0.0;     ///< log k_i - 2 delta_v / eps^2
  double rate = 0.0;
};

struct EscapeRate {
  std::array<SaddleTerm, 2> per_saddle;
  double total = 0.0;
  double log_total = 0.0;
  double epsilon = 0.0;
};

/// Leading-order Kramers rate out of `from`, summed over both saddles.
/// Throws DegenerateHessian if a Hessian determinant is below 1e-12.
EscapeRate static_rate(const CriticalSet& critical_set, Well from, double epsilon);

/// Left-to-right and right-to-left escape rates of the frozen potential on a
/// uniform phase grid t_j = j T / n over one forcing period.
class RateTable {
 public:
  RateTable() = default;
  RateTable(double period, std::vector<double> rates_lr, std::vector<double> rates_rl);

  double period() const { return lr_.period(); }
  std::size_t size() const { return lr_.size(); }
  std::vector<double> phases() const;

  std::span<const double> rates_lr() const { return lr_.samples(); }
  std::span<const double> rates_rl() const { return rl_.samples(); }

  /// R_{-1+1}(t), linearly interpolated and periodically extended.
  const PeriodicFunction& left_to_right() const { return lr_; }
  /// R_{+1-1}(t)
  const PeriodicFunction& right_to_left() const { return rl_; }
  const PeriodicFunction& from(Well well) const { return well == Well::Left ? lr_ : rl_; }

 private:
  PeriodicFunction lr_;
  PeriodicFunction rl_;
};

/// Propagates ConvergenceFailure / TopologyChange from the critical point
/// continuation.
RateTable adiabatic_rate_table(const ModelParams& params, const Forcing& forcing, double epsilon,
                               std::size_t n_phase = 1024, unsigned threads = 0);

}  // namespace srk
