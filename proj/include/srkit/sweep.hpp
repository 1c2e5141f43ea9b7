#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srkit/ctmc.hpp"
#include "srkit/escape.hpp"
#include "srkit/measures.hpp"
#include "srkit/potential.hpp"
#include "srkit/reduction.hpp"
#include "srkit/stats.hpp"

namespace srk {

/// One (epsilon, phi) cell: forced ensemble, reduction and analysis.
struct CellSpec {
  ModelParams params;
  Forcing forcing;
  double epsilon = 0.2;
  std::size_t n_realizations = 50;
  double n_periods = 10.0;
  double t_step = 0.014;
  double radius = 0.19;
  std::uint64_t seed = 1;
  std::size_t n_phase = 1024;  ///< rate table and well track grid
  std::size_t n_bins = 1000;   ///< phase bins for folded signals
  double discard_periods = 2.0;
  bool balanced_start = true;
  unsigned threads = 0;
};

struct CellOutcome {
  RateTable rates;
  std::vector<ReductionResult> paths;
  std::vector<EscapeRecord> records;
  PhaseFoldedSignal mean_x;
  PhaseFoldedSignal mean_y;
  PhaseFoldedSignal mean_ybar;
  std::vector<PhaseFoldedSignal> per_realization_y;
  InvariantMeasure occupancy;
  std::optional<SixMeasures> chain;  ///< absent if the occupancy measure is degenerate
  SixMeasures diffusion;
  std::optional<ChainNoise> noise;
  WellKS ks;
};

CellOutcome run_cell(const CellSpec& spec);

enum class Preset { Paper, Desk, Custom };
std::string_view to_string(Preset preset);

struct SweepConfig {
  static constexpr int kSchemaVersion = 1;

  ModelParams params;
  double omega = 1e-3;
  double forcing_fraction = 0.7;  ///< F / F^crit
  std::vector<double> epsilons;
  std::vector<double> angles_deg;
  std::size_t n_realizations = 50;
  double n_periods = 10.0;
  double t_step = 0.014;
  double radius = 0.19;
  std::uint64_t seed = 20261017;
  std::string output_dir = "srk-output";
  Preset preset = Preset::Custom;
  std::size_t n_phase = 1024;
  std::size_t n_bins = 1000;
  double discard_periods = 2.0;
  unsigned threads = 0;

  static SweepConfig paper();
  static SweepConfig desk();

  /// Throws InvalidParams.
  void validate() const;

  /// key = value lines, starting with "schema = 1".
  std::string to_text() const;
  /// Throws ParseError on unknown keys, bad values or a schema mismatch.
  static SweepConfig from_text(std::string_view text);
  static SweepConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  /// FNV-1a 64 of to_text().
  std::uint64_t hash() const;

  double forcing_magnitude() const;
  CellSpec cell(std::size_t i_eps, std::size_t i_phi) const;
  std::uint64_t cell_seed(std::size_t i_eps, std::size_t i_phi) const;

  bool operator==(const SweepConfig&) const = default;
};

struct Artifact {
  std::string kind;
  std::string path;  ///< relative to the manifest directory
  std::size_t rows = 0;
  std::size_t bytes = 0;

  bool operator==(const Artifact&) const = default;
};

struct CellEntry {
  std::size_t i_eps = 0;
  std::size_t i_phi = 0;
  double epsilon = 0.0;
  double phi_deg = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  std::vector<Artifact> artifacts;

  bool operator==(const CellEntry&) const = default;
};

struct Manifest {
  std::filesystem::path directory;  ///< not serialized
  std::string config_hash;
  std::uint64_t seed = 0;
  double period = 0.0;
  std::vector<CellEntry> cells;
  std::vector<Artifact> artifacts;  ///< sweep-level files (config, summary)

  std::string to_json() const;
  static Manifest from_json(std::string_view text, std::filesystem::path directory);
  static Manifest load(const std::filesystem::path& path);
  void save() const;

  /// Throws MissingArtifact if a referenced file is absent or its size or row
  /// count differs from the record.
  void verify() const;
};

inline constexpr const char* kOutputDirEnv = "SRK_OUTPUT_DIR";

/// SRK_OUTPUT_DIR, when set and nonempty, replaces `configured`.
std::filesystem::path resolve_output_dir(const std::string& configured);

/// Writes one cell's files under `directory` and returns its entry. Failures are
/// reported in the entry rather than thrown.
CellEntry write_cell(const SweepConfig& config, std::size_t i_eps, std::size_t i_phi,
                     const std::filesystem::path& directory);

using ProgressFn = std::function<void(const CellEntry&)>;

/// Runs every cell in (epsilon, phi) order, then writes summary.csv, config.txt
/// and manifest.json into `directory` (defaults to resolve_output_dir).
Manifest run_sweep(const SweepConfig& config, std::optional<std::filesystem::path> directory = std::nullopt,
                   const ProgressFn& progress = {});

/// Per-figure plot data derived from a sweep, written to `out_dir`
/// (default: <manifest dir>/plots). Returns the files written.
std::vector<Artifact> emit_plots(const Manifest& manifest, std::optional<std::filesystem::path> out_dir = std::nullopt);

}  // namespace srk
