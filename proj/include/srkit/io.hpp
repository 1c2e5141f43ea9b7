#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srkit/escape.hpp"
#include "srkit/folding.hpp"
#include "srkit/kramers.hpp"
#include "srkit/reduction.hpp"
#include "srkit/sde.hpp"

namespace srk {

/// Shortest text that reads back to the same double.
std::string format_number(double v);

/// Numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws ParseError if the column is absent.
  std::size_t column(std::string_view name) const;
  std::vector<double> values(std::string_view name) const;
};

/// Throws MissingArtifact if the file is absent, ParseError on malformed rows.
CsvTable read_csv(const std::filesystem::path& path);

struct FileStats {
  std::size_t rows = 0;   ///< data rows, header excluded
  std::size_t bytes = 0;
};

std::string csv_text(std::span<const std::string> header, std::span<const std::vector<double>> rows);
FileStats write_text(const std::filesystem::path& path, const std::string& text, std::size_t rows);
FileStats write_csv(const std::filesystem::path& path, std::span<const std::string> header,
                    std::span<const std::vector<double>> rows);

/// Columns: well (-1 left, +1 right), u, t, duration, phase_in, phase_escape.
FileStats write_escape_records(const std::filesystem::path& path, std::span<const EscapeRecord> records,
                               double period);
std::vector<EscapeRecord> read_escape_records(const std::filesystem::path& path);

/// Columns: phase, R_lr, R_rl.
FileStats write_rate_table(const std::filesystem::path& path, const RateTable& table);
RateTable read_rate_table(const std::filesystem::path& path, double period);

/// Columns: well (-1/+1), phase_in, phase_escape.
FileStats write_scatter(const std::filesystem::path& path, const EscapeHistogram& hist);
/// Columns: bin_start, bin_end, count, density (durations in units of T).
FileStats write_histogram(const std::filesystem::path& path, const EscapeHistogram& hist);

/// Columns: t, x, y.
FileStats write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& traj);

/// Binary trajectory frame, all fields little-endian:
///   magic "SRKT" (4 bytes), version u32 = 1, stride u64, t_step f64, count u64,
///   then count records of (t, x, y) as f64.
inline constexpr std::uint32_t kTrajectoryFormatVersion = 1;
FileStats write_trajectory_binary(const std::filesystem::path& path, const TrajectoryRecord& traj);
/// Throws MissingArtifact or ParseError (bad magic, version or length).
TrajectoryRecord read_trajectory_binary(const std::filesystem::path& path);

}  // namespace srk
