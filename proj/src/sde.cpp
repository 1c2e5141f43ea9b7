#include "srkit/sde.hpp"

#include <algorithm>

#include "srkit/parallel.hpp"

namespace srk {

Vec2 left_unforced_well(const ModelParams& params) { return {-std::sqrt(1.0 + 2.0 * params.a), 0.0}; }
Vec2 right_unforced_well(const ModelParams& params) { return {std::sqrt(1.0 + 2.0 * params.a), 0.0}; }

std::vector<std::string> SimConfig::validate() const {
  params.validate();
  forcing.validate();
  if (!(t_step > 0.0) || !std::isfinite(t_step)) {
    throw InvalidParams(fmt::format("t_step must be positive (got {})", t_step));
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParams(fmt::format("epsilon must be >= 0 (got {})", epsilon));
  }
  if (!(n_periods >= 0.0) || !std::isfinite(n_periods)) {
    throw InvalidParams(fmt::format("n_periods must be >= 0 (got {})", n_periods));
  }
  std::vector<std::string> warnings;
  if (t_step > forcing.period() / 1000.0) {
    warnings.push_back(fmt::format("t_step = {} exceeds T/1000 = {}; the drive is poorly resolved", t_step,
                                   forcing.period() / 1000.0));
  }
  return warnings;
}

Vec2 SimConfig::start() const { return initial_position.value_or(left_unforced_well(params)); }

std::uint64_t SimConfig::step_count() const {
  return static_cast<std::uint64_t>(std::llround(n_periods * forcing.period() / t_step));
}

TrajectoryRecord simulate(const SimConfig& config, std::uint64_t realization) {
  return simulate(config, realization, [](double, double, double) {});
}

namespace {

class FanOut {
 public:
  explicit FanOut(std::span<const std::unique_ptr<PathSink>> sinks) : sinks_(sinks) {}
  void operator()(double t, double x, double y) const {
    for (const auto& s : sinks_) s->observe(t, x, y);
  }

 private:
  std::span<const std::unique_ptr<PathSink>> sinks_;
};

}  // namespace

void ensemble(const SimConfig& config, std::size_t n_realizations, std::span<Reducer* const> reducers,
              const EnsembleOptions& options) {
  if (n_realizations == 0) throw InvalidParams("ensemble needs at least one realization");
  config.validate();

  const unsigned threads = options.threads == 0 ? default_thread_count() : options.threads;
  // Realizations run in chunks so that at most `chunk` sets of sinks are alive.
  const std::size_t chunk = std::max<std::size_t>(1, 4 * static_cast<std::size_t>(threads));
  const double t_end = static_cast<double>(config.step_count()) * config.t_step;

  for (std::size_t begin = 0; begin < n_realizations; begin += chunk) {
    const std::size_t end = std::min(n_realizations, begin + chunk);
    std::vector<std::vector<std::unique_ptr<PathSink>>> sinks(end - begin);
    parallel_for(
        end - begin,
        [&](std::size_t i) {
          const std::uint64_t realization = begin + i;
          try {
            auto& mine = sinks[i];
            mine.reserve(reducers.size());
            for (Reducer* r : reducers) mine.push_back(r->make_sink(realization));
            SimConfig local = config;
            local.record_stride = 0;
            if (options.balanced_start) {
              local.initial_position = realization % 2 == 0 ? left_unforced_well(config.params)
                                                            : right_unforced_well(config.params);
            }
            simulate(local, realization, FanOut(mine));
            for (auto& s : mine) s->finish(t_end);
          } catch (const Error& e) {
            throw RealizationError(realization, e.what());
          }
        },
        threads);
    for (std::size_t i = 0; i < sinks.size(); ++i) {
      for (std::size_t r = 0; r < reducers.size(); ++r) {
        reducers[r]->merge(begin + i, std::move(sinks[i][r]));
      }
    }
  }
}

namespace {

class FoldSink : public PathSink {
 public:
  FoldSink(double period, std::size_t n_bins, double discard_time)
      : x_(period, n_bins), y_(period, n_bins), discard_time_(discard_time) {}

  void observe(double t, double x, double y) override {
    if (t < discard_time_) return;
    x_.add_sample(t, x);
    y_.add_sample(t, y);
  }

  PhaseFolder x_;
  PhaseFolder y_;

 private:
  double discard_time_;
};

}  // namespace

PhaseFoldReducer::PhaseFoldReducer(double period, std::size_t n_bins, double discard_periods)
    : period_(period), n_bins_(n_bins), discard_time_(discard_periods * period) {}

std::unique_ptr<PathSink> PhaseFoldReducer::make_sink(std::uint64_t) const {
  return std::make_unique<FoldSink>(period_, n_bins_, discard_time_);
}

void PhaseFoldReducer::merge(std::uint64_t, std::unique_ptr<PathSink> sink) {
  auto& fold = dynamic_cast<FoldSink&>(*sink);
  per_x_.push_back(fold.x_.result());
  per_y_.push_back(fold.y_.result());
}

PhaseFoldedSignal PhaseFoldReducer::mean_x() const { return combine(per_x_); }
PhaseFoldedSignal PhaseFoldReducer::mean_y() const { return combine(per_y_); }

}  // namespace srk
