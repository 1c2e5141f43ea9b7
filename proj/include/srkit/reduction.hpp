#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "srkit/kramers.hpp"
#include "srkit/potential.hpp"
#include "srkit/sde.hpp"

namespace srk {

/// Positions of the two wells of the frozen potential over one period, with a
/// capture radius around each.
class WellTracks {
 public:
  /// Throws BallOverlap if the balls touch at any phase.
  WellTracks(double period, double radius, std::vector<Vec2> left, std::vector<Vec2> right);

  double period() const { return period_; }
  double radius() const { return radius_; }
  std::size_t size() const { return left_.size(); }
  std::span<const Vec2> left() const { return left_; }
  std::span<const Vec2> right() const { return right_; }

  struct Positions {
    Vec2 left;
    Vec2 right;
  };
  /// Linear interpolation in phase, periodically extended.
  Positions at(double t) const;

  /// Largest x reached by the left well and smallest x reached by the right
  /// well over the period.
  double left_max_x() const { return left_max_x_; }
  double right_min_x() const { return right_min_x_; }

 private:
  double period_;
  double radius_;
  std::vector<Vec2> left_;
  std::vector<Vec2> right_;
  double left_max_x_ = 0.0;
  double right_min_x_ = 0.0;
};

WellTracks build_well_tracks(const ModelParams& params, const Forcing& forcing, double radius,
                             std::size_t n_phase = 1024, unsigned threads = 0);

/// Symbolic state: -1 (left well) or +1 (right well).
enum class ChainState : int { Left = -1, Right = +1 };

struct Segment {
  ChainState state;
  double start = 0.0;
  double end = 0.0;
};

/// Piecewise-constant two-state path starting at the first ball entry.
struct SymbolicPath {
  std::vector<Segment> segments;

  bool empty() const { return segments.empty(); }
  ChainState initial_state() const { return segments.front().state; }
  double start() const { return segments.front().start; }
  double end() const { return segments.back().end; }
};

/// One completed sojourn: entrance into `well` at u, entrance into the other
/// well at t.
struct EscapeRecord {
  Well well = Well::Left;
  double u = 0.0;
  double t = 0.0;

  double duration() const { return t - u; }
  /// mod(u, T) / T
  double phase_in(double period) const;
  /// mod(t - u, T) / T
  double phase_escape(double period) const;
};

struct ReductionResult {
  SymbolicPath path;
  std::vector<EscapeRecord> records;

  /// Informational: the path never entered either ball.
  bool no_transitions() const { return path.empty(); }
};

/// Streaming reduction. The label flips only when the path enters the other
/// well's ball; between balls it keeps the last visited well.
class PathClassifier {
 public:
  explicit PathClassifier(const WellTracks& tracks) : tracks_(&tracks) {}

  void observe(double t, double x, double y);
  /// Closes the open segment at the last observed time.
  ReductionResult finish();

 private:
  const WellTracks* tracks_;
  ReductionResult result_;
  bool labelled_ = false;
  ChainState state_ = ChainState::Left;
  double segment_start_ = 0.0;
  double last_t_ = 0.0;
};

ReductionResult reduce(const TrajectoryRecord& trajectory, const WellTracks& tracks);

/// Ensemble reducer that keeps each realization's ReductionResult.
class ChainReducer : public Reducer {
 public:
  explicit ChainReducer(const WellTracks& tracks) : tracks_(&tracks) {}

  std::unique_ptr<PathSink> make_sink(std::uint64_t realization) const override;
  void merge(std::uint64_t realization, std::unique_ptr<PathSink> sink) override;

  const std::vector<ReductionResult>& results() const { return results_; }
  /// Records of all realizations concatenated in realization order.
  std::vector<EscapeRecord> all_records() const;

 private:
  const WellTracks* tracks_;
  std::vector<ReductionResult> results_;
};

}  // namespace srk
