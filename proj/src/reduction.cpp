#include "srkit/reduction.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "srkit/errors.hpp"
#include "srkit/parallel.hpp"

namespace srk {

WellTracks::WellTracks(double period, double radius, std::vector<Vec2> left, std::vector<Vec2> right)
    : period_(period), radius_(radius), left_(std::move(left)), right_(std::move(right)) {
  if (!(period_ > 0.0)) throw InvalidParams("well tracks: period must be positive");
  if (!(radius_ > 0.0)) throw InvalidParams("well tracks: radius must be positive");
  if (left_.empty() || left_.size() != right_.size()) {
    throw InvalidParams("well tracks: left and right tracks must be nonempty and of equal length");
  }
  for (std::size_t j = 0; j < left_.size(); ++j) {
    const double separation = norm(left_[j] - right_[j]);
    if (!(separation > 2.0 * radius_)) {
      throw BallOverlap(fmt::format("wells are {} apart at phase index {}, capture radius {}", separation, j,
                                    radius_));
    }
  }
  left_max_x_ = left_[0].x;
  right_min_x_ = right_[0].x;
  for (std::size_t j = 0; j < left_.size(); ++j) {
    left_max_x_ = std::max(left_max_x_, left_[j].x);
    right_min_x_ = std::min(right_min_x_, right_[j].x);
  }
}

WellTracks::Positions WellTracks::at(double t) const {
  const std::size_t n = left_.size();
  double tau = t - std::floor(t / period_) * period_;
  const double x = tau / period_ * static_cast<double>(n);
  auto j = static_cast<std::size_t>(x);
  if (j >= n) j = n - 1;
  const double w = x - static_cast<double>(j);
  const std::size_t k = (j + 1) % n;
  return {left_[j] + w * (left_[k] - left_[j]), right_[j] + w * (right_[k] - right_[j])};
}

WellTracks build_well_tracks(const ModelParams& params, const Forcing& forcing, double radius,
                             std::size_t n_phase, unsigned threads) {
  params.validate();
  forcing.validate();
  if (n_phase == 0) throw InvalidParams("well tracks need at least one phase");
  const double period = forcing.period();
  std::vector<Vec2> left(n_phase);
  std::vector<Vec2> right(n_phase);
  parallel_for(
      n_phase,
      [&](std::size_t j) {
        const double t = static_cast<double>(j) * period / static_cast<double>(n_phase);
        const CriticalSet set = find_critical_points_at(params, forcing, t);
        left[j] = set.well_left.position;
        right[j] = set.well_right.position;
      },
      threads);
  return WellTracks(period, radius, std::move(left), std::move(right));
}

double EscapeRecord::phase_in(double period) const {
  return (u - std::floor(u / period) * period) / period;
}

double EscapeRecord::phase_escape(double period) const {
  const double d = duration();
  return (d - std::floor(d / period) * period) / period;
}

void PathClassifier::observe(double t, double x, double y) {
  last_t_ = t;
  // Once labelled only the opposite ball matters; skip the interpolation when
  // the point cannot reach it.
  if (labelled_) {
    const double r = tracks_->radius();
    if (state_ == ChainState::Left && x < tracks_->right_min_x() - r) return;
    if (state_ == ChainState::Right && x > tracks_->left_max_x() + r) return;
  }
  const auto wells = tracks_->at(t);
  const double r2 = tracks_->radius() * tracks_->radius();
  const Vec2 z{x, y};
  ChainState hit;
  if (norm_squared(z - wells.left) <= r2) {
    hit = ChainState::Left;
  } else if (norm_squared(z - wells.right) <= r2) {
    hit = ChainState::Right;
  } else {
    return;
  }
  if (!labelled_) {
    labelled_ = true;
    state_ = hit;
    segment_start_ = t;
    return;
  }
  if (hit == state_) return;
  result_.path.segments.push_back({state_, segment_start_, t});
  result_.records.push_back({state_ == ChainState::Left ? Well::Left : Well::Right, segment_start_, t});
  state_ = hit;
  segment_start_ = t;
}

ReductionResult PathClassifier::finish() {
  if (labelled_) result_.path.segments.push_back({state_, segment_start_, last_t_});
  labelled_ = false;
  return std::move(result_);
}

ReductionResult reduce(const TrajectoryRecord& trajectory, const WellTracks& tracks) {
  PathClassifier classifier(tracks);
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    classifier.observe(trajectory.times[i], trajectory.xs[i], trajectory.ys[i]);
  }
  return classifier.finish();
}

namespace {

class ClassifierSink : public PathSink {
 public:
  explicit ClassifierSink(const WellTracks& tracks) : classifier_(tracks) {}
  void observe(double t, double x, double y) override { classifier_.observe(t, x, y); }
  void finish(double) override { result_ = classifier_.finish(); }

  PathClassifier classifier_;
  ReductionResult result_;
};

}  // namespace

std::unique_ptr<PathSink> ChainReducer::make_sink(std::uint64_t) const {
  return std::make_unique<ClassifierSink>(*tracks_);
}

void ChainReducer::merge(std::uint64_t, std::unique_ptr<PathSink> sink) {
  results_.push_back(std::move(dynamic_cast<ClassifierSink&>(*sink).result_));
}

std::vector<EscapeRecord> ChainReducer::all_records() const {
  std::vector<EscapeRecord> out;
  for (const auto& r : results_) out.insert(out.end(), r.records.begin(), r.records.end());
  return out;
}

}  // namespace srk
