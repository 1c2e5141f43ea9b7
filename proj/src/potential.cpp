#include "srkit/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "srkit/errors.hpp"

namespace srk {

void ModelParams::validate() const {
  if (!(a > 0.0)) throw InvalidParams(fmt::format("a must be positive (got {})", a));
  if (!(b > 0.0)) throw InvalidParams(fmt::format("b must be positive (got {})", b));
  if (!(b < 0.5)) throw InvalidParams(fmt::format("b must be below 1/2 (got {})", b));
}

void Forcing::validate() const {
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
    throw InvalidParams(fmt::format("forcing magnitude must be >= 0 (got {})", magnitude));
  }
  if (!(angle_deg >= 0.0 && angle_deg <= 90.0)) {
    throw InvalidParams(fmt::format("forcing angle must lie in [0, 90] degrees (got {})", angle_deg));
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InvalidParams(fmt::format("forcing frequency must be positive (got {})", omega));
  }
}

double Forcing::period() const { return 2.0 * std::numbers::pi / omega; }

Vec2 Forcing::direction() const {
  // Exact axes at the endpoints so that symmetry checks are not polluted by
  // cos(pi/2) ~ 6e-17.
  if (angle_deg == 0.0) return {1.0, 0.0};
  if (angle_deg == 90.0) return {0.0, 1.0};
  const double phi = angle_deg * std::numbers::pi / 180.0;
  return {std::cos(phi), std::sin(phi)};
}

Vec2 Forcing::drift_force(double t) const { return std::cos(omega * t) * amplitude(); }

double eval_potential(const ModelParams& params, Vec2 forcing_vector, Vec2 point) {
  const double r2 = norm_squared(point);
  return 0.25 * r2 * r2 - 0.5 * r2 - params.a * point.x * point.x + params.b * point.y * point.y +
         dot(forcing_vector, point);
}

Vec2 eval_gradient(const ModelParams& params, Vec2 forcing_vector, Vec2 point) {
  const double r2 = norm_squared(point);
  return {point.x * (r2 - 1.0 - 2.0 * params.a) + forcing_vector.x,
          point.y * (r2 - 1.0 + 2.0 * params.b) + forcing_vector.y};
}

Sym2 eval_hessian(const ModelParams& params, Vec2 point) {
  const double x2 = point.x * point.x;
  const double y2 = point.y * point.y;
  return {3.0 * x2 + y2 - 1.0 - 2.0 * params.a, 2.0 * point.x * point.y,
          x2 + 3.0 * y2 - 1.0 + 2.0 * params.b};
}

std::string_view to_string(PointKind kind) {
  switch (kind) {
    case PointKind::Well:
      return "well";
    case PointKind::Saddle:
      return "saddle";
    case PointKind::Hill:
      return "hill";
  }
  return "unknown";
}

std::array<CriticalSet::Labelled, 5> CriticalSet::labelled() const {
  return {{{"well_left", &well_left},
           {"well_right", &well_right},
           {"saddle_upper", &saddle_upper},
           {"saddle_lower", &saddle_lower},
           {"hill", &hill}}};
}

namespace {

constexpr std::array<std::string_view, 5> kLabels = {"well_left", "well_right", "saddle_upper",
                                                     "saddle_lower", "hill"};

CriticalPoint classify(const ModelParams& params, Vec2 forcing_vector, Vec2 position,
                       double eigenvalue_tolerance, std::string_view label) {
  const Sym2 h = eval_hessian(params, position);
  const auto [lo, hi] = h.eigenvalues();
  if (std::abs(lo) < eigenvalue_tolerance || std::abs(hi) < eigenvalue_tolerance) {
    throw TopologyChange(fmt::format("{} at ({}, {}) is degenerate (eigenvalues {}, {})", label,
                                     position.x, position.y, lo, hi));
  }
  CriticalPoint p;
  p.position = position;
  p.kind = lo > 0.0 ? PointKind::Well : (hi < 0.0 ? PointKind::Hill : PointKind::Saddle);
  p.value = eval_potential(params, forcing_vector, position);
  p.hessian_det = h.det();
  p.lambda_min = lo;
  p.lambda_max = hi;
  return p;
}

Vec2 newton(const ModelParams& params, Vec2 forcing_vector, Vec2 start,
            const ContinuationOptions& options, std::string_view label) {
  Vec2 z = start;
  for (int it = 0; it <= options.max_iterations; ++it) {
    const Vec2 g = eval_gradient(params, forcing_vector, z);
    if (norm(g) < options.gradient_tolerance) return z;
    if (it == options.max_iterations) break;
    const Sym2 h = eval_hessian(params, z);
    if (h.det() == 0.0) break;
    z -= h.solve(g);
    if (!std::isfinite(z.x) || !std::isfinite(z.y)) break;
  }
  throw ConvergenceFailure(fmt::format(
      "Newton iteration for {} did not reach |grad V| < {} within {} iterations at forcing ({}, {})",
      label, options.gradient_tolerance, options.max_iterations, forcing_vector.x,
      forcing_vector.y));
}

}  // namespace

CriticalSet find_critical_points(const ModelParams& params, Vec2 forcing_vector,
                                 const ContinuationOptions& options) {
  params.validate();
  if (options.ramp_steps < 1) throw InvalidParams("continuation needs at least one ramp step");

  const double xw = std::sqrt(1.0 + 2.0 * params.a);
  const double ys = std::sqrt(1.0 - 2.0 * params.b);
  std::array<Vec2, 5> points = {Vec2{-xw, 0.0}, Vec2{xw, 0.0}, Vec2{0.0, ys}, Vec2{0.0, -ys},
                                Vec2{0.0, 0.0}};
  constexpr std::array<PointKind, 5> kinds = {PointKind::Well, PointKind::Well, PointKind::Saddle,
                                              PointKind::Saddle, PointKind::Hill};

  std::array<CriticalPoint, 5> result{};
  for (int step = 1; step <= options.ramp_steps; ++step) {
    const double s = static_cast<double>(step) / options.ramp_steps;
    const Vec2 f = s * forcing_vector;
    for (std::size_t i = 0; i < points.size(); ++i) {
      points[i] = newton(params, f, points[i], options, kLabels[i]);
      result[i] = classify(params, f, points[i], options.eigenvalue_tolerance, kLabels[i]);
      if (result[i].kind != kinds[i]) {
        throw TopologyChange(fmt::format("{} changed type to {} at forcing ({}, {})", kLabels[i],
                                         to_string(result[i].kind), f.x, f.y));
      }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        if (norm(points[i] - points[j]) < options.merge_distance) {
          throw TopologyChange(fmt::format("{} and {} merged at forcing ({}, {})", kLabels[i],
                                           kLabels[j], f.x, f.y));
        }
      }
    }
  }

  CriticalSet set;
  set.well_left = result[0];
  set.well_right = result[1];
  set.saddle_upper = result[2];
  set.saddle_lower = result[3];
  set.hill = result[4];
  set.forcing_vector = forcing_vector;
  return set;
}

CriticalSet find_critical_points_at(const ModelParams& params, const Forcing& forcing, double t,
                                    const ContinuationOptions& options) {
  CriticalSet set = find_critical_points(params, forcing.frozen_forcing_vector(t), options);
  set.phase = t;
  return set;
}

double CriticalForcing::value() const {
  return std::min({x_saddle, x_critical, y_saddle, y_critical});
}

CriticalForcing critical_forcing(const ModelParams& params) {
  if (!(params.b < 0.5)) {
    throw InvalidParams(fmt::format("critical forcing requires b < 1/2 (got {})", params.b));
  }
  const double a = params.a;
  const double b = params.b;
  CriticalForcing c;
  c.x_saddle = 2.0 * (a + b) * std::sqrt(1.0 - 2.0 * b);
  c.x_critical = std::sqrt(4.0 * std::pow(1.0 + 2.0 * a, 3) / 27.0);
  c.y_saddle = 2.0 * (a + b) * std::sqrt(1.0 + 2.0 * a);
  c.y_critical = std::sqrt(4.0 * std::pow(1.0 - 2.0 * b, 3) / 27.0);
  return c;
}

}  // namespace srk
