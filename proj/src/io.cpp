#include "srkit/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "srkit/errors.hpp"

namespace srk {

std::string format_number(double v) { return fmt::format("{}", v); }

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError(fmt::format("CSV has no column '{}'", name));
}

std::vector<double> CsvTable::values(std::string_view name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(fmt::format("cannot open {}", path.string()));
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (table.header.empty()) {
      for (auto f : fields) table.header.emplace_back(f);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ParseError(fmt::format("{}:{}: expected {} fields, found {}", path.string(), line_no,
                                   table.header.size(), fields.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto f = fields[i];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[i]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError(fmt::format("{}:{}: '{}' is not a number", path.string(), line_no, f));
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ParseError(fmt::format("{} has no header row", path.string()));
  return table;
}

std::string csv_text(std::span<const std::string> header, std::span<const std::vector<double>> rows) {
  std::string out = fmt::format("{}\n", fmt::join(header, ","));
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i > 0) out.push_back(',');
      out += format_number(r[i]);
    }
    out.push_back('\n');
  }
  return out;
}

FileStats write_text(const std::filesystem::path& path, const std::string& text, std::size_t rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw Error(fmt::format("failed writing {}", path.string()));
  return {rows, text.size()};
}

FileStats write_csv(const std::filesystem::path& path, std::span<const std::string> header,
                    std::span<const std::vector<double>> rows) {
  return write_text(path, csv_text(header, rows), rows.size());
}

FileStats write_escape_records(const std::filesystem::path& path, std::span<const EscapeRecord> records,
                               double period) {
  const std::vector<std::string> header{"well", "u", "t", "duration", "phase_in", "phase_escape"};
  std::vector<std::vector<double>> rows;
  rows.reserve(records.size());
  for (const auto& r : records) {
    rows.push_back({r.well == Well::Left ? -1.0 : 1.0, r.u, r.t, r.duration(), r.phase_in(period),
                    r.phase_escape(period)});
  }
  return write_csv(path, header, rows);
}

std::vector<EscapeRecord> read_escape_records(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t cw = table.column("well");
  const std::size_t cu = table.column("u");
  const std::size_t ct = table.column("t");
  std::vector<EscapeRecord> out;
  out.reserve(table.rows.size());
  for (const auto& r : table.rows) {
    if (r[cw] != -1.0 && r[cw] != 1.0) throw ParseError(fmt::format("well must be -1 or +1, got {}", r[cw]));
    out.push_back({r[cw] < 0.0 ? Well::Left : Well::Right, r[cu], r[ct]});
  }
  return out;
}

FileStats write_rate_table(const std::filesystem::path& path, const RateTable& table) {
  const std::vector<std::string> header{"phase", "R_lr", "R_rl"};
  const auto t = table.phases();
  std::vector<std::vector<double>> rows;
  rows.reserve(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) rows.push_back({t[j], table.rates_lr()[j], table.rates_rl()[j]});
  return write_csv(path, header, rows);
}

RateTable read_rate_table(const std::filesystem::path& path, double period) {
  const CsvTable table = read_csv(path);
  // Either the rate-table columns or the chain's (p, q) naming.
  const bool chain_names = std::find(table.header.begin(), table.header.end(), "p") != table.header.end();
  return chain_names ? RateTable(period, table.values("p"), table.values("q"))
                     : RateTable(period, table.values("R_lr"), table.values("R_rl"));
}

FileStats write_scatter(const std::filesystem::path& path, const EscapeHistogram& hist) {
  const std::vector<std::string> header{"well", "phase_in", "phase_escape"};
  std::vector<std::vector<double>> rows;
  rows.reserve(hist.scatter.size());
  for (const auto& p : hist.scatter) rows.push_back({p.well == Well::Left ? -1.0 : 1.0, p.phase_in, p.phase_escape});
  return write_csv(path, header, rows);
}

FileStats write_histogram(const std::filesystem::path& path, const EscapeHistogram& hist) {
  const std::vector<std::string> header{"bin_start", "bin_end", "count", "density"};
  std::vector<std::vector<double>> rows;
  rows.reserve(hist.counts.size());
  for (std::size_t j = 0; j < hist.counts.size(); ++j) {
    rows.push_back({hist.bin_start(j), hist.bin_end(j), static_cast<double>(hist.counts[j]), hist.density(j)});
  }
  return write_csv(path, header, rows);
}

FileStats write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& traj) {
  const std::vector<std::string> header{"t", "x", "y"};
  std::vector<std::vector<double>> rows;
  rows.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) rows.push_back({traj.times[i], traj.xs[i], traj.ys[i]});
  return write_csv(path, header, rows);
}

namespace {

constexpr char kTrajectoryMagic[4] = {'S', 'R', 'K', 'T'};

void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_le(std::string_view in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return v;
}

}  // namespace

FileStats write_trajectory_binary(const std::filesystem::path& path, const TrajectoryRecord& traj) {
  std::string out(kTrajectoryMagic, 4);
  put_le(out, kTrajectoryFormatVersion, 4);
  put_le(out, traj.stride, 8);
  put_le(out, std::bit_cast<std::uint64_t>(traj.t_step), 8);
  put_le(out, traj.size(), 8);
  out.reserve(out.size() + 24 * traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    put_le(out, std::bit_cast<std::uint64_t>(traj.times[i]), 8);
    put_le(out, std::bit_cast<std::uint64_t>(traj.xs[i]), 8);
    put_le(out, std::bit_cast<std::uint64_t>(traj.ys[i]), 8);
  }
  return write_text(path, out, traj.size());
}

TrajectoryRecord read_trajectory_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifact(fmt::format("no such file: {}", path.string()));
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  constexpr std::size_t header = 32;
  if (data.size() < header || std::string_view(data).substr(0, 4) != std::string_view(kTrajectoryMagic, 4)) {
    throw ParseError(fmt::format("{} is not a trajectory frame", path.string()));
  }
  const auto version = get_le(data, 4, 4);
  if (version != kTrajectoryFormatVersion) throw ParseError(fmt::format("unsupported trajectory version {}", version));
  TrajectoryRecord r;
  r.stride = get_le(data, 8, 8);
  r.t_step = std::bit_cast<double>(get_le(data, 16, 8));
  const auto count = get_le(data, 24, 8);
  if (data.size() != header + 24 * count) throw ParseError(fmt::format("{} has a truncated body", path.string()));
  r.times.resize(count);
  r.xs.resize(count);
  r.ys.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t at = header + 24 * i;
    r.times[i] = std::bit_cast<double>(get_le(data, at, 8));
    r.xs[i] = std::bit_cast<double>(get_le(data, at + 8, 8));
    r.ys[i] = std::bit_cast<double>(get_le(data, at + 16, 8));
  }
  return r;
}

}  // namespace srk
