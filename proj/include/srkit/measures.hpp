#pragma once

#include <cstddef>
#include <span>

#include "srkit/ctmc.hpp"
#include "srkit/folding.hpp"
#include "srkit/reduction.hpp"

namespace srk {

/// Time-weighted fold of Y (values -1/+1) over one period, ignoring t < t_start.
PhaseFoldedSignal fold_chain(const SymbolicPath& path, double period, std::size_t n_bins, double t_start = 0.0);

/// Fold of the out-of-phase chain
///   Ybar = 1 if (Y = +1 and mod(t, T) <= T/2) or (Y = -1 and mod(t, T) > T/2), else 0.
PhaseFoldedSignal out_of_phase_chain(const SymbolicPath& path, double period, std::size_t n_bins,
                                     double t_start = 0.0);

/// (1/N) |sum_j v_j exp(-2 pi i j / N)|; a cosine of amplitude A gives A/2.
double linear_response(const PhaseFoldedSignal& signal);

struct SixMeasures {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  double m5 = 0.0;
  double m6 = 0.0;
  bool chain = true;  ///< false: only m1, m2 are defined (diffusion)
  bool floor_used = false;  ///< m5 replaced a nonpositive nu by the smallest positive value
};

/// M1 = Y_lin / F, M2 = Y_lin / (eps F), M3 = int <Y>^2, M4 = int <Ybar>,
/// M5 = int over the half periods of the relative entropy of nu against the
/// in-phase indicator, M6 = int of the entropy of nu. Integrals are sums over
/// the bins times T/N. All inputs share the grid.
SixMeasures six_measures(const PhaseFoldedSignal& mean_y, const PhaseFoldedSignal& mean_ybar,
                         std::span<const double> nu_minus, std::span<const double> nu_plus, double forcing,
                         double epsilon);

SixMeasures six_measures(const PhaseFoldedSignal& mean_y, const PhaseFoldedSignal& mean_ybar,
                         const InvariantMeasure& nu, double forcing, double epsilon);

/// M1 = X_lin / F and M2 = X_lin / (eps F) from the folded mean of x.
SixMeasures diffusion_measures(const PhaseFoldedSignal& mean_x, double forcing, double epsilon);

/// Invariant measure estimated from occupancy: nu_-(t) = (1 - <Y>)/2.
InvariantMeasure occupancy_measure(const PhaseFoldedSignal& mean_y);

/// Monte Carlo uncertainty of M1 and M3 from per-realization folds.
struct ChainNoise {
  std::size_t n = 0;
  /// Standard error of Y_lin / F.
  double m1_standard_error = 0.0;
  /// sum_j dt SE_j^2, the size of M3 that sampling noise alone produces.
  double m3_noise_scale = 0.0;
};

ChainNoise chain_noise(std::span<const PhaseFoldedSignal> per_realization_y, double forcing);

}  // namespace srk
