// srk: command-line driver for the stochastic resonance toolkit.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "srkit/ctmc.hpp"
#include "srkit/errors.hpp"
#include "srkit/escape.hpp"
#include "srkit/io.hpp"
#include "srkit/kramers.hpp"
#include "srkit/measures.hpp"
#include "srkit/potential.hpp"
#include "srkit/sde.hpp"
#include "srkit/stats.hpp"
#include "srkit/sweep.hpp"

namespace fs = std::filesystem;
using namespace srk;

namespace {

struct ModelOpts {
  double a = 0.15;
  double b = 0.1;
  double omega = 1e-3;
  double fraction = 0.7;
  std::optional<double> magnitude;
  double phi = 0.0;

  void add(CLI::App* app, bool forcing = true) {
    app->add_option("--a", a, "x-axis shape coefficient")->capture_default_str();
    app->add_option("--b", b, "y-axis shape coefficient")->capture_default_str();
    if (!forcing) return;
    app->add_option("--omega", omega, "forcing angular frequency")->capture_default_str();
    app->add_option("--fraction", fraction, "forcing magnitude as a fraction of F^crit")->capture_default_str();
    app->add_option("--forcing", magnitude, "absolute forcing magnitude (overrides --fraction)");
    app->add_option("--phi", phi, "forcing angle in degrees")->capture_default_str();
  }

  ModelParams params() const {
    ModelParams p{a, b};
    p.validate();
    return p;
  }

  Forcing forcing() const {
    const double f = magnitude ? *magnitude : fraction * critical_forcing(params()).value();
    Forcing out{f, phi, omega};
    out.validate();
    return out;
  }

  double period() const { return 2.0 * std::numbers::pi / omega; }
};

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  if (path.empty()) {
    std::cout << csv_text(header, rows);
  } else {
    write_csv(path, header, rows);
  }
}

void print_ks(const char* well, const std::optional<KSResult>& r) {
  if (!r) {
    fmt::print("{},0,nan,nan,nan,0\n", well);
    return;
  }
  fmt::print("{},{},{},{},{},{}\n", well, r->n, format_number(r->statistic), format_number(r->scaled),
             format_number(r->q_value), r->accepted_99 ? 1 : 0);
}

std::vector<std::vector<double>> staircase_rows(const std::vector<double>& v) {
  std::vector<std::vector<double>> rows;
  for (const auto& [x, f] : ks_staircase(v)) rows.push_back({x, f});
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srk: stochastic resonance in a two-pathway double well"};
  app.require_subcommand(1);

  // critical-points
  ModelOpts cp_model;
  double cp_t = 0.0;
  std::string cp_out;
  auto* cp = app.add_subcommand("critical-points", "critical points of the frozen potential at time t");
  cp_model.add(cp);
  cp->add_option("--t", cp_t, "time at which the forcing is frozen")->capture_default_str();
  cp->add_option("-o,--output", cp_out, "CSV file (default: stdout)");
  cp->callback([&] {
    const CriticalSet s = find_critical_points_at(cp_model.params(), cp_model.forcing(), cp_t);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    for (const auto& [label, p] : s.labelled()) {
      labels.emplace_back(label);
      rows.push_back({p->position.x, p->position.y, p->value, p->hessian_det, p->lambda_min});
    }
    std::string text = "label,x,y,V,det_hessian,lambda_min\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      text += labels[i];
      for (double v : rows[i]) text += "," + format_number(v);
      text += "\n";
    }
    if (cp_out.empty()) {
      std::cout << text;
    } else {
      write_text(cp_out, text, rows.size());
    }
  });

  // rates
  ModelOpts rt_model;
  double rt_eps = 0.2;
  std::size_t rt_n = 1024;
  std::string rt_out;
  auto* rt = app.add_subcommand("rates", "adiabatic Kramers rate table over one period");
  rt_model.add(rt);
  rt->add_option("--epsilon", rt_eps, "noise strength")->capture_default_str();
  rt->add_option("--n-phase", rt_n, "phase grid size")->capture_default_str();
  rt->add_option("-o,--output", rt_out, "CSV file (default: stdout)");
  rt->callback([&] {
    const RateTable t = adiabatic_rate_table(rt_model.params(), rt_model.forcing(), rt_eps, rt_n);
    if (rt_out.empty()) {
      std::vector<std::vector<double>> rows;
      const auto ph = t.phases();
      for (std::size_t j = 0; j < t.size(); ++j) rows.push_back({ph[j], t.rates_lr()[j], t.rates_rl()[j]});
      emit("", {"phase", "R_lr", "R_rl"}, rows);
    } else {
      write_rate_table(rt_out, t);
    }
  });

  // ctmc
  std::string ch_rates, ch_out;
  double ch_omega = 1e-3, ch_periods = 1.0, ch_nu0 = 0.5;
  std::size_t ch_samples = 257;
  auto* ch = app.add_subcommand("ctmc", "transient and invariant measure of the two-state chain");
  ch->add_option("--rates", ch_rates, "rate CSV with columns phase, p, q (or R_lr, R_rl)")->required();
  ch->add_option("--omega", ch_omega, "angular frequency; the period is 2 pi / omega")->capture_default_str();
  ch->add_option("--periods", ch_periods, "time span in periods")->capture_default_str();
  ch->add_option("--samples", ch_samples, "output rows")->capture_default_str();
  ch->add_option("--nu-minus", ch_nu0, "initial probability of the left state")->capture_default_str();
  ch->add_option("-o,--output", ch_out, "CSV file (default: stdout)");
  ch->callback([&] {
    const double period = 2.0 * std::numbers::pi / ch_omega;
    const TwoStateChain chain(RatePair::from_table(read_rate_table(ch_rates, period)));
    if (ch_samples < 2) throw InvalidParams("need at least two samples");
    const double end = ch_periods * period;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < ch_samples; ++i) {
      const double t = end * static_cast<double>(i) / static_cast<double>(ch_samples - 1);
      const auto s = chain.transient({0.0, ch_nu0, 1.0 - ch_nu0}, t);
      const double bar = chain.invariant_minus(t);
      rows.push_back({t, s.nu_minus, s.nu_plus, bar, 1.0 - bar});
    }
    emit(ch_out, {"t", "nu_minus", "nu_plus", "nu_bar_minus", "nu_bar_plus"}, rows);
  });

  // simulate
  ModelOpts sm_model;
  double sm_eps = 0.2, sm_step = 0.014, sm_periods = 1.0;
  std::uint64_t sm_seed = 1, sm_real = 0;
  std::size_t sm_stride = 10;
  std::optional<double> sm_x0, sm_y0;
  std::string sm_format = "csv", sm_out;
  auto* sm = app.add_subcommand("simulate", "one Euler-Maruyama trajectory");
  sm_model.add(sm);
  sm->add_option("--epsilon", sm_eps, "noise strength")->capture_default_str();
  sm->add_option("--t-step", sm_step, "time step")->capture_default_str();
  sm->add_option("--periods", sm_periods, "duration in forcing periods")->capture_default_str();
  sm->add_option("--seed", sm_seed, "master seed")->capture_default_str();
  sm->add_option("--realization", sm_real, "realization index (RNG substream)")->capture_default_str();
  sm->add_option("--stride", sm_stride, "keep every k-th step")->capture_default_str();
  sm->add_option("--x0", sm_x0, "initial x (default: left unforced well)");
  sm->add_option("--y0", sm_y0, "initial y");
  sm->add_option("--format", sm_format, "csv or binary")->check(CLI::IsMember({"csv", "binary"}))->capture_default_str();
  sm->add_option("-o,--output", sm_out, "output file (required for binary)");
  sm->callback([&] {
    SimConfig c;
    c.params = sm_model.params();
    c.forcing = sm_model.forcing();
    c.epsilon = sm_eps;
    c.t_step = sm_step;
    c.n_periods = sm_periods;
    c.seed = sm_seed;
    c.record_stride = sm_stride;
    if (sm_x0 || sm_y0) {
      const Vec2 def = left_unforced_well(c.params);
      c.initial_position = Vec2{sm_x0.value_or(def.x), sm_y0.value_or(def.y)};
    }
    for (const auto& w : c.validate()) fmt::print(stderr, "warning: {}\n", w);
    const TrajectoryRecord r = simulate(c, sm_real);
    if (sm_format == "binary") {
      if (sm_out.empty()) throw InvalidParams("binary output needs --output");
      write_trajectory_binary(sm_out, r);
    } else if (sm_out.empty()) {
      std::vector<std::vector<double>> rows;
      for (std::size_t i = 0; i < r.size(); ++i) rows.push_back({r.times[i], r.xs[i], r.ys[i]});
      emit("", {"t", "x", "y"}, rows);
    } else {
      write_trajectory_csv(sm_out, r);
    }
  });

  // escape-times
  std::string es_records, es_dir;
  double es_omega = 1e-3, es_bw = 0.05;
  auto* es = app.add_subcommand("escape-times", "histogram and phase scatter of escape durations");
  es->add_option("--records", es_records, "escape record CSV")->required();
  es->add_option("--omega", es_omega, "angular frequency")->capture_default_str();
  es->add_option("--bin-width", es_bw, "bin width in periods")->capture_default_str();
  es->add_option("--output-dir", es_dir, "output directory (default: srk-output, or $SRK_OUTPUT_DIR)");
  es->callback([&] {
    const auto recs = read_escape_records(es_records);
    const auto h = histogram(recs, 2.0 * std::numbers::pi / es_omega, es_bw);
    const fs::path dir = resolve_output_dir(es_dir.empty() ? "srk-output" : es_dir);
    write_histogram(dir / "histogram.csv", h);
    write_scatter(dir / "scatter.csv", h);
    fmt::print("{} escapes -> {}\n", h.n, dir.string());
  });

  // measures
  ModelOpts ms_model;
  std::string ms_folded, ms_out;
  double ms_eps = 0.2;
  bool ms_append = false;
  auto* ms = app.add_subcommand("measures", "six stochastic resonance measures from a folded-signal CSV");
  ms_model.add(ms);
  ms->add_option("--folded", ms_folded, "CSV with mean_y, mean_ybar, nu_minus, nu_plus per phase bin")->required();
  ms->add_option("--epsilon", ms_eps, "noise strength of the run")->capture_default_str();
  ms->add_option("-o,--output", ms_out, "CSV file (default: stdout)");
  ms->add_flag("--append", ms_append, "append a row to an existing output file");
  ms->callback([&] {
    const CsvTable t = read_csv(ms_folded);
    const double period = ms_model.period();
    auto fold = [&](const char* col) {
      PhaseFoldedSignal s;
      s.period = period;
      s.values = t.values(col);
      s.weights.assign(s.values.size(), 1.0);
      return s;
    };
    const auto m = six_measures(fold("mean_y"), fold("mean_ybar"), t.values("nu_minus"), t.values("nu_plus"),
                                ms_model.forcing().magnitude, ms_eps);
    const std::vector<std::string> header{"phi", "epsilon", "m1", "m2", "m3", "m4", "m5", "m6"};
    const std::vector<double> row{ms_model.phi, ms_eps, m.m1, m.m2, m.m3, m.m4, m.m5, m.m6};
    if (ms_append && !ms_out.empty() && fs::exists(ms_out)) {
      auto table = read_csv(ms_out);
      table.rows.push_back(row);
      write_csv(ms_out, table.header, table.rows);
    } else {
      emit(ms_out, header, {row});
    }
  });

  // ks-test
  std::string ks_records, ks_rates, ks_dir;
  double ks_omega = 1e-3;
  auto* ks = app.add_subcommand("ks-test", "conditional Kolmogorov-Smirnov test per well");
  ks->add_option("--records", ks_records, "escape record CSV")->required();
  ks->add_option("--rates", ks_rates, "rate table CSV")->required();
  ks->add_option("--omega", ks_omega, "angular frequency")->capture_default_str();
  ks->add_option("--output-dir", ks_dir, "directory for staircase CSVs (default: srk-output, or $SRK_OUTPUT_DIR)");
  ks->callback([&] {
    const double period = 2.0 * std::numbers::pi / ks_omega;
    const auto recs = read_escape_records(ks_records);
    const auto table = read_rate_table(ks_rates, period);
    const WellKS r = conditional_ks_by_well(recs, table);
    fmt::print("well,n,statistic,scaled,q_value,accepted_99\n");
    print_ks("left", r.left);
    print_ks("right", r.right);
    const fs::path dir = resolve_output_dir(ks_dir.empty() ? "srk-output" : ks_dir);
    const std::vector<std::string> header{"x", "fraction"};
    if (r.left) write_csv(dir / "staircase_left.csv", header, staircase_rows(r.left_values));
    if (r.right) write_csv(dir / "staircase_right.csv", header, staircase_rows(r.right_values));
  });

  // sweep
  std::string sw_preset = "desk", sw_config, sw_dir, sw_save;
  std::vector<double> sw_eps, sw_phi;
  std::optional<std::size_t> sw_real, sw_nphase, sw_nbins;
  std::optional<double> sw_periods, sw_step, sw_radius, sw_omega, sw_fraction, sw_discard;
  std::optional<std::uint64_t> sw_seed;
  std::optional<unsigned> sw_threads;
  bool sw_dry = false;
  auto* sw = app.add_subcommand("sweep", "run the (epsilon, phi) parameter sweep");
  sw->add_option("--preset", sw_preset, "paper, desk or custom")
      ->check(CLI::IsMember({"paper", "desk", "custom"}))
      ->capture_default_str();
  sw->add_option("--config", sw_config, "config file (key = value); flags override it");
  sw->add_option("--epsilons", sw_eps, "noise strengths")->delimiter(',');
  sw->add_option("--angles", sw_phi, "forcing angles in degrees")->delimiter(',');
  sw->add_option("--realizations", sw_real, "realizations per cell");
  sw->add_option("--periods", sw_periods, "forcing periods per realization");
  sw->add_option("--t-step", sw_step, "Euler step");
  sw->add_option("--radius", sw_radius, "well ball radius");
  sw->add_option("--omega", sw_omega, "angular frequency");
  sw->add_option("--fraction", sw_fraction, "forcing as a fraction of F^crit");
  sw->add_option("--seed", sw_seed, "master seed");
  sw->add_option("--n-phase", sw_nphase, "rate table grid");
  sw->add_option("--n-bins", sw_nbins, "phase bins for folded signals");
  sw->add_option("--discard", sw_discard, "periods discarded before folding");
  sw->add_option("--threads", sw_threads, "worker threads (0: all cores)");
  sw->add_option("--output-dir", sw_dir, "output directory ($SRK_OUTPUT_DIR overrides)");
  sw->add_option("--save-config", sw_save, "write the effective config to this file");
  sw->add_flag("--dry-run", sw_dry, "print the effective config and exit");
  sw->callback([&] {
    SweepConfig c = !sw_config.empty()      ? SweepConfig::load(sw_config)
                    : sw_preset == "paper"  ? SweepConfig::paper()
                    : sw_preset == "desk"   ? SweepConfig::desk()
                                            : SweepConfig{};
    bool custom = false;
    auto set = [&](auto& field, const auto& opt) {
      if (opt) {
        field = *opt;
        custom = true;
      }
    };
    if (!sw_eps.empty()) c.epsilons = sw_eps, custom = true;
    if (!sw_phi.empty()) c.angles_deg = sw_phi, custom = true;
    set(c.n_realizations, sw_real);
    set(c.n_periods, sw_periods);
    set(c.t_step, sw_step);
    set(c.radius, sw_radius);
    set(c.omega, sw_omega);
    set(c.forcing_fraction, sw_fraction);
    set(c.seed, sw_seed);
    set(c.n_phase, sw_nphase);
    set(c.n_bins, sw_nbins);
    set(c.discard_periods, sw_discard);
    if (sw_threads) c.threads = *sw_threads;
    if (!sw_dir.empty()) c.output_dir = sw_dir;
    if (custom) c.preset = Preset::Custom;
    c.validate();
    if (!sw_save.empty()) c.save(sw_save);
    if (sw_dry) {
      std::cout << c.to_text();
      return;
    }
    const std::size_t total = c.epsilons.size() * c.angles_deg.size();
    std::size_t done = 0;
    const Manifest m = run_sweep(c, std::nullopt, [&](const CellEntry& e) {
      ++done;
      fmt::print(stderr, "[{}/{}] eps={} phi={} {}\n", done, total, e.epsilon, e.phi_deg,
                 e.ok ? "ok" : "FAILED: " + e.error);
    });
    std::size_t failed = 0;
    for (const auto& e : m.cells) failed += !e.ok;
    fmt::print("{} cells ({} failed) -> {}\n", m.cells.size(), failed, (m.directory / "manifest.json").string());
  });

  // emit-plots
  std::string ep_manifest, ep_dir;
  auto* ep = app.add_subcommand("emit-plots", "plot-data CSVs from a sweep manifest");
  ep->add_option("--manifest", ep_manifest, "manifest.json or its directory (default: the output directory)");
  ep->add_option("--output-dir", ep_dir, "where to write (default: <sweep dir>/plots)");
  ep->callback([&] {
    fs::path p = ep_manifest.empty() ? resolve_output_dir("srk-output") : fs::path(ep_manifest);
    if (fs::is_directory(p)) p /= "manifest.json";
    const Manifest m = Manifest::load(p);
    const auto files = emit_plots(m, ep_dir.empty() ? std::nullopt : std::optional<fs::path>(ep_dir));
    fmt::print("{} plot files\n", files.size());
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const srk::Error& e) {
    fmt::print(stderr, "srk: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "srk: unexpected error: {}\n", e.what());
    return 1;
  }
  return 0;
}
