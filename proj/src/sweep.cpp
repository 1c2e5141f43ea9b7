#include "srkit/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "srkit/errors.hpp"
#include "srkit/io.hpp"
#include "srkit/rng.hpp"
#include "srkit/sde.hpp"

namespace srk {

CellOutcome run_cell(const CellSpec& spec) {
  const double period = spec.forcing.period();
  CellOutcome out;
  out.rates = adiabatic_rate_table(spec.params, spec.forcing, spec.epsilon, spec.n_phase, spec.threads);
  const WellTracks tracks = build_well_tracks(spec.params, spec.forcing, spec.radius, spec.n_phase, spec.threads);

  SimConfig sim;
  sim.params = spec.params;
  sim.forcing = spec.forcing;
  sim.epsilon = spec.epsilon;
  sim.t_step = spec.t_step;
  sim.n_periods = spec.n_periods;
  sim.seed = spec.seed;
  sim.record_stride = 0;

  PhaseFoldReducer xy(period, spec.n_bins, spec.discard_periods);
  ChainReducer chain(tracks);
  Reducer* reducers[] = {&xy, &chain};
  ensemble(sim, spec.n_realizations, reducers, {spec.threads, spec.balanced_start});

  out.paths = chain.results();
  out.records = chain.all_records();
  out.mean_x = xy.mean_x();

  const double t_start = spec.discard_periods * period;
  std::vector<PhaseFoldedSignal> per_ybar;
  for (const auto& r : out.paths) {
    if (r.path.empty() || r.path.end() <= t_start) continue;
    out.per_realization_y.push_back(fold_chain(r.path, period, spec.n_bins, t_start));
    per_ybar.push_back(out_of_phase_chain(r.path, period, spec.n_bins, t_start));
  }
  if (out.per_realization_y.empty()) throw EmptyInput("no realization entered a well after the discarded prefix");
  out.mean_y = combine(out.per_realization_y);
  out.mean_ybar = combine(per_ybar);
  out.occupancy = occupancy_measure(out.mean_y);
  try {
    out.chain = six_measures(out.mean_y, out.mean_ybar, out.occupancy, spec.forcing.magnitude, spec.epsilon);
  } catch (const DegenerateInvariantMeasure&) {
    out.chain.reset();
  }
  out.diffusion = diffusion_measures(out.mean_x, spec.forcing.magnitude, spec.epsilon);
  if (out.per_realization_y.size() >= 2) out.noise = chain_noise(out.per_realization_y, spec.forcing.magnitude);
  out.ks = conditional_ks_by_well(out.records, out.rates);
  return out;
}

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::Paper: return "paper";
    case Preset::Desk: return "desk";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

SweepConfig SweepConfig::paper() {
  SweepConfig c;
  c.preset = Preset::Paper;
  for (int i = 0; i < 16; ++i) c.epsilons.push_back((15 + i) / 100.0);
  c.angles_deg = {0, 75, 78, 81, 84, 87, 90};
  c.n_realizations = 200;
  c.n_periods = 30;
  return c;
}

SweepConfig SweepConfig::desk() {
  SweepConfig c;
  c.preset = Preset::Desk;
  c.epsilons = {0.18, 0.21, 0.24, 0.27};
  c.angles_deg = {0, 84, 90};
  c.n_realizations = 50;
  c.n_periods = 10;
  return c;
}

void SweepConfig::validate() const {
  params.validate();
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidParams("omega must be positive");
  if (!(forcing_fraction > 0.0 && forcing_fraction < 1.0)) {
    throw InvalidParams(fmt::format("forcing fraction must lie in (0, 1), got {}", forcing_fraction));
  }
  if (epsilons.empty() || angles_deg.empty()) throw InvalidParams("sweep needs at least one epsilon and one angle");
  for (double e : epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) throw InvalidParams(fmt::format("epsilon must be positive, got {}", e));
  }
  for (double a : angles_deg) {
    if (!(a >= 0.0 && a <= 90.0)) throw InvalidParams(fmt::format("angle must lie in [0, 90], got {}", a));
  }
  if (n_realizations == 0) throw InvalidParams("need at least one realization");
  if (!(n_periods > discard_periods)) throw InvalidParams("n_periods must exceed discard_periods");
  if (!(discard_periods >= 0.0)) throw InvalidParams("discard_periods must be >= 0");
  if (!(t_step > 0.0)) throw InvalidParams("t_step must be positive");
  if (!(radius > 0.0)) throw InvalidParams("radius must be positive");
  if (n_phase < 4) throw InvalidParams("n_phase must be at least 4");
  if (n_bins < 2 || n_bins % 2 != 0) throw InvalidParams("n_bins must be even and at least 2");
}

namespace {

std::string join_numbers(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_number(v[i]);
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_value(std::string_view key, std::string_view text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(fmt::format("config: bad value '{}' for '{}'", text, key));
  }
  return value;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (!item.empty()) out.push_back(parse_value<double>(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string SweepConfig::to_text() const {
  std::string s;
  s += fmt::format("schema = {}\n", kSchemaVersion);
  s += fmt::format("preset = {}\n", to_string(preset));
  s += fmt::format("a = {}\n", format_number(params.a));
  s += fmt::format("b = {}\n", format_number(params.b));
  s += fmt::format("omega = {}\n", format_number(omega));
  s += fmt::format("forcing_fraction = {}\n", format_number(forcing_fraction));
  s += fmt::format("epsilons = {}\n", join_numbers(epsilons));
  s += fmt::format("angles_deg = {}\n", join_numbers(angles_deg));
  s += fmt::format("n_realizations = {}\n", n_realizations);
  s += fmt::format("n_periods = {}\n", format_number(n_periods));
  s += fmt::format("t_step = {}\n", format_number(t_step));
  s += fmt::format("radius = {}\n", format_number(radius));
  s += fmt::format("seed = {}\n", seed);
  s += fmt::format("output_dir = {}\n", output_dir);
  s += fmt::format("n_phase = {}\n", n_phase);
  s += fmt::format("n_bins = {}\n", n_bins);
  s += fmt::format("discard_periods = {}\n", format_number(discard_periods));
  s += fmt::format("threads = {}\n", threads);
  return s;
}

SweepConfig SweepConfig::from_text(std::string_view text) {
  SweepConfig c;
  bool have_schema = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(fmt::format("config line {}: expected key = value", line_no));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "schema") {
      if (parse_value<int>(key, value) != kSchemaVersion) {
        throw ParseError(fmt::format("config schema {} is not supported (expected {})", value, kSchemaVersion));
      }
      have_schema = true;
    } else if (key == "preset") {
      if (value == "paper") c.preset = Preset::Paper;
      else if (value == "desk") c.preset = Preset::Desk;
      else if (value == "custom") c.preset = Preset::Custom;
      else throw ParseError(fmt::format("config: unknown preset '{}'", value));
    } else if (key == "a") {
      c.params.a = parse_value<double>(key, value);
    } else if (key == "b") {
      c.params.b = parse_value<double>(key, value);
    } else if (key == "omega") {
      c.omega = parse_value<double>(key, value);
    } else if (key == "forcing_fraction") {
      c.forcing_fraction = parse_value<double>(key, value);
    } else if (key == "epsilons") {
      c.epsilons = parse_list(key, value);
    } else if (key == "angles_deg") {
      c.angles_deg = parse_list(key, value);
    } else if (key == "n_realizations") {
      c.n_realizations = parse_value<std::size_t>(key, value);
    } else if (key == "n_periods") {
      c.n_periods = parse_value<double>(key, value);
    } else if (key == "t_step") {
      c.t_step = parse_value<double>(key, value);
    } else if (key == "radius") {
      c.radius = parse_value<double>(key, value);
    } else if (key == "seed") {
      c.seed = parse_value<std::uint64_t>(key, value);
    } else if (key == "output_dir") {
      c.output_dir = std::string(value);
    } else if (key == "n_phase") {
      c.n_phase = parse_value<std::size_t>(key, value);
    } else if (key == "n_bins") {
      c.n_bins = parse_value<std::size_t>(key, value);
    } else if (key == "discard_periods") {
      c.discard_periods = parse_value<double>(key, value);
    } else if (key == "threads") {
      c.threads = parse_value<unsigned>(key, value);
    } else {
      throw ParseError(fmt::format("config line {}: unknown key '{}'", line_no, key));
    }
  }
  if (!have_schema) throw ParseError("config has no schema line");
  return c;
}

SweepConfig SweepConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(fmt::format("cannot open config {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

void SweepConfig::save(const std::filesystem::path& path) const { write_text(path, to_text(), 0); }

std::uint64_t SweepConfig::hash() const {
  // Thread count and output location do not change results.
  SweepConfig c = *this;
  c.threads = 0;
  c.output_dir.clear();
  return fnv1a(c.to_text());
}

double SweepConfig::forcing_magnitude() const { return forcing_fraction * critical_forcing(params).value(); }

std::uint64_t SweepConfig::cell_seed(std::size_t i_eps, std::size_t i_phi) const {
  return derive_seed(seed, {i_eps, i_phi});
}

CellSpec SweepConfig::cell(std::size_t i_eps, std::size_t i_phi) const {
  CellSpec s;
  s.params = params;
  s.forcing = {forcing_magnitude(), angles_deg.at(i_phi), omega};
  s.epsilon = epsilons.at(i_eps);
  s.n_realizations = n_realizations;
  s.n_periods = n_periods;
  s.t_step = t_step;
  s.radius = radius;
  s.seed = cell_seed(i_eps, i_phi);
  s.n_phase = n_phase;
  s.n_bins = n_bins;
  s.discard_periods = discard_periods;
  s.threads = threads;
  return s;
}

std::filesystem::path resolve_output_dir(const std::string& configured) {
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return configured;
}

namespace {

using nlohmann::json;

json artifact_json(const Artifact& a) {
  return {{"kind", a.kind}, {"path", a.path}, {"rows", a.rows}, {"bytes", a.bytes}};
}

Artifact artifact_from(const json& j) {
  return {j.at("kind").get<std::string>(), j.at("path").get<std::string>(), j.at("rows").get<std::size_t>(),
          j.at("bytes").get<std::size_t>()};
}

std::string cell_dir_name(std::size_t i_eps, std::size_t i_phi) { return fmt::format("cell_e{:02}_p{:02}", i_eps, i_phi); }

const std::vector<std::string>& summary_header() {
  static const std::vector<std::string> h{
      "i_eps",         "i_phi",         "epsilon",      "phi_deg",        "ok",         "n_left",
      "n_right",       "m1",            "m2",           "m3",             "m4",         "m5",
      "m6",            "x_m1",          "x_m2",         "m1_se",          "m3_noise",   "ks_left_scaled",
      "ks_left_q",     "ks_left_accept", "ks_right_scaled", "ks_right_q", "ks_right_accept"};
  return h;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> summary_row(std::size_t i_eps, std::size_t i_phi, double eps, double phi, const CellOutcome* c) {
  std::vector<double> row{static_cast<double>(i_eps), static_cast<double>(i_phi), eps, phi, c ? 1.0 : 0.0};
  if (!c) {
    row.resize(summary_header().size(), kNaN);
    return row;
  }
  std::size_t n_left = 0;
  for (const auto& r : c->records) n_left += r.well == Well::Left ? 1 : 0;
  row.push_back(static_cast<double>(n_left));
  row.push_back(static_cast<double>(c->records.size() - n_left));
  if (c->chain) {
    for (double m : {c->chain->m1, c->chain->m2, c->chain->m3, c->chain->m4, c->chain->m5, c->chain->m6}) row.push_back(m);
  } else {
    for (int i = 0; i < 6; ++i) row.push_back(kNaN);
  }
  row.push_back(c->diffusion.m1);
  row.push_back(c->diffusion.m2);
  row.push_back(c->noise ? c->noise->m1_standard_error : kNaN);
  row.push_back(c->noise ? c->noise->m3_noise_scale : kNaN);
  for (const auto* ks : {&c->ks.left, &c->ks.right}) {
    if (*ks) {
      row.push_back((*ks)->scaled);
      row.push_back((*ks)->q_value);
      row.push_back((*ks)->accepted_99 ? 1.0 : 0.0);
    } else {
      row.insert(row.end(), {kNaN, kNaN, kNaN});
    }
  }
  return row;
}

Artifact record(std::string kind, const std::filesystem::path& base, const std::filesystem::path& file, FileStats st) {
  return {std::move(kind), std::filesystem::relative(file, base).generic_string(), st.rows, st.bytes};
}

}  // namespace

CellEntry write_cell(const SweepConfig& config, std::size_t i_eps, std::size_t i_phi,
                     const std::filesystem::path& directory) {
  CellEntry entry;
  entry.i_eps = i_eps;
  entry.i_phi = i_phi;
  entry.epsilon = config.epsilons.at(i_eps);
  entry.phi_deg = config.angles_deg.at(i_phi);
  entry.seed = config.cell_seed(i_eps, i_phi);
  const auto dir = directory / cell_dir_name(i_eps, i_phi);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  std::optional<CellOutcome> outcome;
  try {
    outcome = run_cell(config.cell(i_eps, i_phi));
    entry.ok = true;
  } catch (const std::exception& e) {
    entry.error = e.what();
  }
  const double period = 2.0 * std::acos(-1.0) / config.omega;
  if (outcome) {
    const auto& c = *outcome;
    entry.artifacts.push_back(
        record("escapes", directory, dir / "escapes.csv", write_escape_records(dir / "escapes.csv", c.records, period)));
    entry.artifacts.push_back(record("rates", directory, dir / "rates.csv", write_rate_table(dir / "rates.csv", c.rates)));

    const std::vector<std::string> header{"t", "mean_x", "mean_y", "mean_ybar", "nu_minus", "nu_plus"};
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < c.mean_y.size(); ++j) {
      rows.push_back({c.mean_y.bin_start(j), c.mean_x.values[j], c.mean_y.values[j], c.mean_ybar.values[j],
                      c.occupancy.nu_minus_bar[j], c.occupancy.nu_plus_bar[j]});
    }
    entry.artifacts.push_back(record("folded", directory, dir / "folded.csv", write_csv(dir / "folded.csv", header, rows)));

    for (const auto& [name, values] : {std::pair{"ks_left", &c.ks.left_values}, std::pair{"ks_right", &c.ks.right_values}}) {
      std::vector<std::vector<double>> vrows;
      for (double v : *values) vrows.push_back({v});
      const std::vector<std::string> vh{"v"};
      const auto file = dir / fmt::format("{}.csv", name);
      entry.artifacts.push_back(record(name, directory, file, write_csv(file, vh, vrows)));
    }
  }
  const std::vector<std::vector<double>> srow{
      summary_row(i_eps, i_phi, entry.epsilon, entry.phi_deg, outcome ? &*outcome : nullptr)};
  const auto file = dir / "cell_summary.csv";
  entry.artifacts.push_back(record("cell_summary", directory, file, write_csv(file, summary_header(), srow)));
  return entry;
}

Manifest run_sweep(const SweepConfig& config, std::optional<std::filesystem::path> directory,
                   const ProgressFn& progress) {
  config.validate();
  const auto dir = directory.value_or(resolve_output_dir(config.output_dir));
  std::filesystem::create_directories(dir);

  Manifest m;
  m.directory = dir;
  m.config_hash = fmt::format("{:016x}", config.hash());
  m.seed = config.seed;
  m.period = 2.0 * std::acos(-1.0) / config.omega;

  std::vector<std::vector<double>> summary;
  for (std::size_t ie = 0; ie < config.epsilons.size(); ++ie) {
    for (std::size_t ip = 0; ip < config.angles_deg.size(); ++ip) {
      CellEntry entry = write_cell(config, ie, ip, dir);
      const auto cell_summary = read_csv(dir / entry.artifacts.back().path);
      summary.insert(summary.end(), cell_summary.rows.begin(), cell_summary.rows.end());
      if (progress) progress(entry);
      m.cells.push_back(std::move(entry));
    }
  }
  const auto config_file = dir / "config.txt";
  m.artifacts.push_back(record("config", dir, config_file, write_text(config_file, config.to_text(), 0)));
  const auto summary_file = dir / "summary.csv";
  m.artifacts.push_back(record("summary", dir, summary_file, write_csv(summary_file, summary_header(), summary)));
  m.save();
  return m;
}

std::string Manifest::to_json() const {
  json j;
  j["format"] = "srk-manifest";
  j["version"] = 1;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["period"] = period;
  j["artifacts"] = json::array();
  for (const auto& a : artifacts) j["artifacts"].push_back(artifact_json(a));
  j["cells"] = json::array();
  for (const auto& c : cells) {
    json cj{{"i_eps", c.i_eps}, {"i_phi", c.i_phi}, {"epsilon", c.epsilon}, {"phi_deg", c.phi_deg},
            {"seed", c.seed},   {"ok", c.ok},       {"error", c.error},     {"artifacts", json::array()}};
    for (const auto& a : c.artifacts) cj["artifacts"].push_back(artifact_json(a));
    j["cells"].push_back(std::move(cj));
  }
  return j.dump(2) + "\n";
}

Manifest Manifest::from_json(std::string_view text, std::filesystem::path directory) {
  Manifest m;
  m.directory = std::move(directory);
  try {
    const json j = json::parse(text);
    if (j.at("format") != "srk-manifest" || j.at("version") != 1) throw ParseError("not a version 1 manifest");
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.period = j.at("period").get<double>();
    for (const auto& a : j.at("artifacts")) m.artifacts.push_back(artifact_from(a));
    for (const auto& cj : j.at("cells")) {
      CellEntry c;
      c.i_eps = cj.at("i_eps").get<std::size_t>();
      c.i_phi = cj.at("i_phi").get<std::size_t>();
      c.epsilon = cj.at("epsilon").get<double>();
      c.phi_deg = cj.at("phi_deg").get<double>();
      c.seed = cj.at("seed").get<std::uint64_t>();
      c.ok = cj.at("ok").get<bool>();
      c.error = cj.at("error").get<std::string>();
      for (const auto& a : cj.at("artifacts")) c.artifacts.push_back(artifact_from(a));
      m.cells.push_back(std::move(c));
    }
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("manifest: {}", e.what()));
  }
  return m;
}

Manifest Manifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(fmt::format("cannot open manifest {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str(), path.parent_path());
}

void Manifest::save() const { write_text(directory / "manifest.json", to_json(), 0); }

void Manifest::verify() const {
  auto check = [&](const Artifact& a) {
    const auto file = directory / a.path;
    if (!std::filesystem::exists(file)) throw MissingArtifact(fmt::format("{} is missing", file.string()));
    const auto bytes = std::filesystem::file_size(file);
    if (bytes != a.bytes) {
      throw MissingArtifact(fmt::format("{} has {} bytes, manifest says {}", file.string(), bytes, a.bytes));
    }
    if (a.kind != "config") {
      const auto rows = read_csv(file).rows.size();
      if (rows != a.rows) {
        throw MissingArtifact(fmt::format("{} has {} rows, manifest says {}", file.string(), rows, a.rows));
      }
    }
  };
  for (const auto& a : artifacts) check(a);
  for (const auto& c : cells) {
    for (const auto& a : c.artifacts) check(a);
  }
}

namespace {

const Artifact* find_artifact(const CellEntry& c, std::string_view kind) {
  for (const auto& a : c.artifacts) {
    if (a.kind == kind) return &a;
  }
  return nullptr;
}

std::filesystem::path require(const Manifest& m, const Artifact& a) {
  const auto file = m.directory / a.path;
  if (!std::filesystem::exists(file)) throw MissingArtifact(fmt::format("{} is missing", file.string()));
  return file;
}

}  // namespace

std::vector<Artifact> emit_plots(const Manifest& manifest, std::optional<std::filesystem::path> out_dir) {
  std::vector<Artifact> written;
  if (manifest.cells.empty()) return written;
  const auto out = out_dir.value_or(manifest.directory / "plots");
  std::filesystem::create_directories(out);
  auto emit = [&](const std::string& kind, const std::filesystem::path& file, FileStats st) {
    written.push_back({kind, std::filesystem::relative(file, out).generic_string(), st.rows, st.bytes});
  };

  // Measures against epsilon, one file per angle.
  const Artifact* summary = nullptr;
  for (const auto& a : manifest.artifacts) {
    if (a.kind == "summary") summary = &a;
  }
  if (summary == nullptr) throw MissingArtifact("manifest lists no summary");
  const CsvTable table = read_csv(require(manifest, *summary));
  std::map<double, std::vector<std::vector<double>>> by_angle;
  const std::vector<std::string> cols{"epsilon", "m1", "m2", "m3", "m4", "m5", "m6", "x_m1", "x_m2"};
  for (const auto& row : table.rows) {
    std::vector<double> r;
    for (const auto& c : cols) r.push_back(row[table.column(c)]);
    by_angle[row[table.column("phi_deg")]].push_back(std::move(r));
  }
  for (auto& [phi, rows] : by_angle) {
    std::sort(rows.begin(), rows.end());
    const auto file = out / fmt::format("measures_phi{}.csv", format_number(phi));
    emit("measures", file, write_csv(file, cols, rows));
  }

  for (const auto& c : manifest.cells) {
    if (!c.ok) continue;
    const std::string tag = cell_dir_name(c.i_eps, c.i_phi);
    const Artifact* esc = find_artifact(c, "escapes");
    if (esc == nullptr) throw MissingArtifact(fmt::format("{} lists no escape records", tag));
    const auto records = read_escape_records(require(manifest, *esc));
    if (!records.empty()) {
      const auto hist = histogram(records, manifest.period);
      const auto hfile = out / fmt::format("histogram_{}.csv", tag);
      emit("histogram", hfile, write_histogram(hfile, hist));
      const auto sfile = out / fmt::format("scatter_{}.csv", tag);
      emit("scatter", sfile, write_scatter(sfile, hist));
    }
    for (const char* side : {"ks_left", "ks_right"}) {
      const Artifact* a = find_artifact(c, side);
      if (a == nullptr) throw MissingArtifact(fmt::format("{} lists no {}", tag, side));
      const auto values = read_csv(require(manifest, *a)).values("v");
      if (values.empty()) continue;
      std::vector<std::vector<double>> rows;
      for (const auto& [x, f] : ks_staircase(values)) rows.push_back({x, f});
      const std::vector<std::string> header{"x", "fraction"};
      const auto file = out / fmt::format("staircase_{}_{}.csv", tag, side + 3);
      emit("staircase", file, write_csv(file, header, rows));
    }
  }
  return written;
}

}  // namespace srk
