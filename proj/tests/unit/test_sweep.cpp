#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "srkit/errors.hpp"
#include "srkit/io.hpp"
#include "srkit/sweep.hpp"

using namespace srk;
namespace fs = std::filesystem;

namespace {

SweepConfig tiny() {
  SweepConfig c;
  c.omega = 0.05;
  c.epsilons = {0.3, 0.4};
  c.angles_deg = {0.0, 90.0};
  c.n_realizations = 6;
  c.n_periods = 5;
  c.n_phase = 128;
  c.n_bins = 100;
  c.discard_periods = 1;
  c.seed = 5;
  return c;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("srkit_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(SweepConfigTest, Presets) {
  const auto p = SweepConfig::paper();
  EXPECT_EQ(p.epsilons.size() * p.angles_deg.size(), 112u);
  EXPECT_EQ(p.preset, Preset::Paper);
  const auto d = SweepConfig::desk();
  EXPECT_EQ(d.epsilons.size() * d.angles_deg.size(), 12u);
  EXPECT_NO_THROW(p.validate());
  EXPECT_NO_THROW(d.validate());
}

TEST(SweepConfigTest, TextRoundTrip) {
  auto c = tiny();
  c.output_dir = "somewhere";
  c.preset = Preset::Desk;
  const auto back = SweepConfig::from_text(c.to_text());
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.hash(), c.hash());
  auto d = c;
  d.threads = 3;
  d.output_dir = "elsewhere";
  EXPECT_EQ(d.hash(), c.hash());
  d.seed = 6;
  EXPECT_NE(d.hash(), c.hash());
  EXPECT_THROW(SweepConfig::from_text("schema = 1\nbogus = 3\n"), ParseError);
  EXPECT_THROW(SweepConfig::from_text("schema = 2\n"), ParseError);
}

TEST(SweepConfigTest, Validation) {
  auto c = tiny();
  c.epsilons.clear();
  EXPECT_THROW(c.validate(), InvalidParams);
  c = tiny();
  c.angles_deg = {95.0};
  EXPECT_THROW(c.validate(), InvalidParams);
  c = tiny();
  c.n_bins = 101;
  EXPECT_THROW(c.validate(), InvalidParams);
}

TEST(SweepConfigTest, CellSeedsAreDistinct) {
  const auto c = tiny();
  EXPECT_NE(c.cell_seed(0, 1), c.cell_seed(1, 0));
  EXPECT_EQ(c.cell(1, 1).epsilon, 0.4);
  EXPECT_EQ(c.cell(1, 1).forcing.angle_deg, 90.0);
}

TEST(Sweep, RunsVerifiesAndReproduces) {
  const auto c = tiny();
  const auto dir_a = scratch("a");
  const auto m = run_sweep(c, dir_a);
  ASSERT_EQ(m.cells.size(), 4u);
  for (const auto& e : m.cells) EXPECT_TRUE(e.ok) << e.error;
  EXPECT_NO_THROW(m.verify());
  const auto loaded = Manifest::load(dir_a / "manifest.json");
  EXPECT_EQ(loaded.cells, m.cells);
  EXPECT_EQ(SweepConfig::load(dir_a / "config.txt"), c);

  const auto dir_b = scratch("b");
  run_sweep(c, dir_b);
  for (const auto& e : m.cells) {
    for (const auto& a : e.artifacts) EXPECT_EQ(slurp(dir_a / a.path), slurp(dir_b / a.path)) << a.path;
  }
  EXPECT_EQ(slurp(dir_a / "summary.csv"), slurp(dir_b / "summary.csv"));

  // A single cell written alone matches the same cell inside the sweep.
  const auto dir_c = scratch("c");
  const auto alone = write_cell(c, 1, 0, dir_c);
  for (const auto& a : alone.artifacts) EXPECT_EQ(slurp(dir_a / a.path), slurp(dir_c / a.path)) << a.path;

  const auto plots = emit_plots(m);
  EXPECT_FALSE(plots.empty());
  for (const auto& a : plots) EXPECT_TRUE(fs::exists(dir_a / "plots" / a.path) || fs::exists(a.path)) << a.path;

  const auto summary = read_csv(dir_a / "summary.csv");
  EXPECT_EQ(summary.rows.size(), 4u);
  EXPECT_NO_THROW(summary.column("m6"));

  fs::remove(dir_a / m.cells[0].artifacts[0].path);
  EXPECT_THROW(m.verify(), MissingArtifact);
  EXPECT_THROW(emit_plots(m), MissingArtifact);
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
  fs::remove_all(dir_c);
}

TEST(Sweep, EmptyManifestGivesEmptyPlots) {
  Manifest m;
  m.directory = scratch("empty");
  EXPECT_TRUE(emit_plots(m).empty());
  fs::remove_all(m.directory);
}

TEST(Sweep, OutputDirFromEnvironment) {
  ::unsetenv(kOutputDirEnv);
  EXPECT_EQ(resolve_output_dir("x"), fs::path("x"));
  ::setenv(kOutputDirEnv, "/tmp/override", 1);
  EXPECT_EQ(resolve_output_dir("x"), fs::path("/tmp/override"));
  ::setenv(kOutputDirEnv, "", 1);
  EXPECT_EQ(resolve_output_dir("x"), fs::path("x"));
  ::unsetenv(kOutputDirEnv);
}

TEST(Io, EscapeRecordRoundTrip) {
  const auto dir = scratch("io");
  const std::vector<EscapeRecord> recs{{Well::Left, 0.1, 2.5}, {Well::Right, 2.5, 1e4 / 3}};
  write_escape_records(dir / "e.csv", recs, 10.0);
  const auto back = read_escape_records(dir / "e.csv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].well, Well::Right);
  EXPECT_EQ(back[1].t, 1e4 / 3);
  const RateTable t(10.0, {0.1, 0.2}, {0.3, 0.4});
  write_rate_table(dir / "r.csv", t);
  const auto rt = read_rate_table(dir / "r.csv", 10.0);
  EXPECT_EQ(rt.rates_rl()[1], 0.4);
  EXPECT_THROW(read_csv(dir / "missing.csv"), MissingArtifact);

  TrajectoryRecord traj;
  traj.stride = 10;
  traj.t_step = 0.014;
  traj.times = {0.0, 0.14, 0.28};
  traj.xs = {-1.1, -1.0, 1.0 / 3};
  traj.ys = {0.0, 0.2, -0.1};
  const auto st = write_trajectory_binary(dir / "t.bin", traj);
  EXPECT_EQ(st.bytes, 32u + 3 * 24);
  const auto tb = read_trajectory_binary(dir / "t.bin");
  EXPECT_EQ(tb.stride, 10u);
  EXPECT_EQ(tb.t_step, 0.014);
  EXPECT_EQ(tb.xs, traj.xs);
  EXPECT_EQ(tb.ys, traj.ys);
  write_text(dir / "bad.bin", "nope", 0);
  EXPECT_THROW(read_trajectory_binary(dir / "bad.bin"), ParseError);
  fs::remove_all(dir);
}
