#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "srkit/errors.hpp"
#include "srkit/folding.hpp"
#include "srkit/potential.hpp"
#include "srkit/rng.hpp"

namespace srk {

struct SimConfig {
  ModelParams params;
  Forcing forcing;
  double epsilon = 0.2;
  double t_step = 0.014;
  double n_periods = 1.0;
  std::uint64_t seed = 0;
  /// Defaults to the left well of the unforced potential.
  std::optional<Vec2> initial_position;
  /// Every k-th step is kept in the TrajectoryRecord; 0 keeps nothing.
  std::size_t record_stride = 10;
  double blowup_radius = 1e3;

  /// Throws InvalidParams on invalid settings; returns warnings.
  std::vector<std::string> validate() const;

  Vec2 start() const;
  std::uint64_t step_count() const;
};

Vec2 left_unforced_well(const ModelParams& params);
Vec2 right_unforced_well(const ModelParams& params);

struct TrajectoryRecord {
  std::size_t stride = 0;
  double t_step = 0.0;
  std::vector<double> times;
  std::vector<double> xs;
  std::vector<double> ys;

  std::size_t size() const { return times.size(); }
};

/// Euler-Maruyama integration of
///   dX = (-grad V_0(X) + F (cos phi, sin phi) cos(Omega t)) dt + eps dW
/// with increments drawn from Rng(config.seed, realization). `observer(t, x, y)`
/// sees the initial point and every step. Throws NumericalBlowup when |X|
/// exceeds config.blowup_radius.
template <class Observer>
TrajectoryRecord simulate(const SimConfig& config, std::uint64_t realization, Observer&& observer) {
  const ModelParams& p = config.params;
  const double dt = config.t_step;
  const double noise = config.epsilon * std::sqrt(dt);
  const double omega = config.forcing.omega;
  const Vec2 amp = config.forcing.amplitude();
  const double well_x = 1.0 + 2.0 * p.a;
  const double well_y = 1.0 - 2.0 * p.b;
  const double blowup2 = config.blowup_radius * config.blowup_radius;
  const std::uint64_t n_steps = config.step_count();

  Rng rng(config.seed, realization);
  TrajectoryRecord record;
  record.stride = config.record_stride;
  record.t_step = dt;
  if (config.record_stride > 0) {
    const std::size_t n_kept = static_cast<std::size_t>(n_steps / config.record_stride) + 1;
    record.times.reserve(n_kept);
    record.xs.reserve(n_kept);
    record.ys.reserve(n_kept);
  }

  double x = config.start().x;
  double y = config.start().y;
  auto keep = [&](std::uint64_t k, double t) {
    if (config.record_stride > 0 && k % config.record_stride == 0) {
      record.times.push_back(t);
      record.xs.push_back(x);
      record.ys.push_back(y);
    }
  };

  // cos(Omega t) by rotation, resynchronised with the library cosine every
  // kResync steps so rounding error cannot accumulate.
  constexpr std::uint64_t kResync = 1024;
  const double rot_c = std::cos(omega * dt);
  const double rot_s = std::sin(omega * dt);
  double drive = 1.0;
  double drive_sin = 0.0;

  observer(0.0, x, y);
  keep(0, 0.0);
  for (std::uint64_t k = 1; k <= n_steps; ++k) {
    if ((k - 1) % kResync == 0) {
      const double t_prev = static_cast<double>(k - 1) * dt;
      drive = std::cos(omega * t_prev);
      drive_sin = std::sin(omega * t_prev);
    } else {
      const double c = drive * rot_c - drive_sin * rot_s;
      drive_sin = drive_sin * rot_c + drive * rot_s;
      drive = c;
    }
    const double r2 = x * x + y * y;
    const double fx = -x * (r2 - well_x) + amp.x * drive;
    const double fy = -y * (r2 - well_y) + amp.y * drive;
    const double g1 = rng.normal();
    const double g2 = rng.normal();
    x += fx * dt + noise * g1;
    y += fy * dt + noise * g2;
    if (!(x * x + y * y <= blowup2)) {
      throw NumericalBlowup(fmt::format("|X| exceeded {} at t = {} (step size {} too large?)",
                                        config.blowup_radius, static_cast<double>(k) * dt, dt));
    }
    const double t = static_cast<double>(k) * dt;
    observer(t, x, y);
    keep(k, t);
  }
  return record;
}

TrajectoryRecord simulate(const SimConfig& config, std::uint64_t realization = 0);

/// Per-realization consumer of a path.
class PathSink {
 public:
  virtual ~PathSink() = default;
  virtual void observe(double t, double x, double y) = 0;
  /// Called once after the last step.
  virtual void finish(double /*t_end*/) {}
};

/// Streaming statistic over an ensemble. `make_sink` may be called from
/// several threads; `merge` is called on one thread in realization order.
class Reducer {
 public:
  virtual ~Reducer() = default;
  virtual std::unique_ptr<PathSink> make_sink(std::uint64_t realization) const = 0;
  virtual void merge(std::uint64_t realization, std::unique_ptr<PathSink> sink) = 0;
};

struct EnsembleOptions {
  unsigned threads = 0;
  /// Start even realizations in the left well and odd ones in the right well,
  /// realizing nu(0) = (1/2, 1/2). Overrides SimConfig::initial_position.
  bool balanced_start = false;
};

/// Runs realizations 0..n-1 with independent random substreams and feeds each
/// path to every reducer. Results do not depend on the thread count.
/// Errors are rethrown as RealizationError carrying the realization index.
void ensemble(const SimConfig& config, std::size_t n_realizations, std::span<Reducer* const> reducers,
              const EnsembleOptions& options = {});

/// Phase-folded mean of x and y after discarding `discard_periods` periods.
class PhaseFoldReducer : public Reducer {
 public:
  PhaseFoldReducer(double period, std::size_t n_bins, double discard_periods = 2.0);

  std::unique_ptr<PathSink> make_sink(std::uint64_t realization) const override;
  void merge(std::uint64_t realization, std::unique_ptr<PathSink> sink) override;

  PhaseFoldedSignal mean_x() const;
  PhaseFoldedSignal mean_y() const;
  const std::vector<PhaseFoldedSignal>& per_realization_x() const { return per_x_; }
  const std::vector<PhaseFoldedSignal>& per_realization_y() const { return per_y_; }

 private:
  double period_;
  std::size_t n_bins_;
  double discard_time_;
  std::vector<PhaseFoldedSignal> per_x_;
  std::vector<PhaseFoldedSignal> per_y_;
};

}  // namespace srk
