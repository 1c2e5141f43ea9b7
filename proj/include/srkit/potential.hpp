#pragma once

#include <array>
#include <string_view>

#include "srkit/geometry.hpp"

namespace srk {

/// Shape coefficients of the Mexican Hat potential
///   V_F(x, y) = r^4/4 - r^2/2 - a x^2 + b y^2 + F_x x + F_y y.
struct ModelParams {
  double a = 0.15;
  double b = 0.1;

  /// Throws InvalidParams unless a > 0 and 0 < b < 1/2.
  void validate() const;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Periodic drive F (cos phi, sin phi) cos(Omega t).
struct Forcing {
  double magnitude = 0.0;  ///< F >= 0
  double angle_deg = 0.0;  ///< phi in [0, 90]
  double omega = 1e-3;     ///< angular frequency

  void validate() const;

  double period() const;
  Vec2 direction() const;
  /// (F_x, F_y)
  Vec2 amplitude() const { return magnitude * direction(); }

  /// The force F cos(Omega t) entering the drift of the diffusion.
  Vec2 drift_force(double t) const;

  /// Forcing vector of the frozen potential at time t. The drift
  /// -grad V_0 + F cos(Omega t) is minus the gradient of V_F with forcing
  /// vector -F cos(Omega t), so this is -drift_force(t).
  Vec2 frozen_forcing_vector(double t) const { return -drift_force(t); }

  friend bool operator==(const Forcing&, const Forcing&) = default;
};

double eval_potential(const ModelParams& params, Vec2 forcing_vector, Vec2 point);
Vec2 eval_gradient(const ModelParams& params, Vec2 forcing_vector, Vec2 point);
Sym2 eval_hessian(const ModelParams& params, Vec2 point);

enum class PointKind { Well, Saddle, Hill };

std::string_view to_string(PointKind kind);

struct CriticalPoint {
  Vec2 position;
  PointKind kind = PointKind::Hill;
  double value = 0.0;
  double hessian_det = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// The five critical points of the frozen potential, labelled by continuation
/// from the unforced configuration.
struct CriticalSet {
  CriticalPoint well_left;
  CriticalPoint well_right;
  CriticalPoint saddle_upper;
  CriticalPoint saddle_lower;
  CriticalPoint hill;
  Vec2 forcing_vector;
  double phase = 0.0;

  struct Labelled {
    std::string_view label;
    const CriticalPoint* point;
  };
  std::array<Labelled, 5> labelled() const;
};

struct ContinuationOptions {
  int ramp_steps = 32;
  double gradient_tolerance = 1e-12;
  int max_iterations = 100;
  double eigenvalue_tolerance = 1e-9;
  double merge_distance = 1e-6;
};

/// Newton iteration on grad V_F = 0 seeded at the unforced critical points,
/// ramping the forcing from zero to `forcing_vector` in uniform steps.
/// Throws ConvergenceFailure or TopologyChange.
CriticalSet find_critical_points(const ModelParams& params, Vec2 forcing_vector,
                                 const ContinuationOptions& options = {});

/// Critical points of the frozen potential felt by the diffusion at time t.
CriticalSet find_critical_points_at(const ModelParams& params, const Forcing& forcing, double t,
                                    const ContinuationOptions& options = {});

/// Bounds on the forcing magnitude below which the five-point topology holds
/// along the x and y axes; `value()` is the minimum of the four.
struct CriticalForcing {
  double x_saddle = 0.0;
  double x_critical = 0.0;
  double y_saddle = 0.0;
  double y_critical = 0.0;

  double value() const;
};

/// Throws InvalidParams if b >= 1/2.
CriticalForcing critical_forcing(const ModelParams& params);

}  // namespace srk
