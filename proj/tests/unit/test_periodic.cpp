#include <cmath>

#include <gtest/gtest.h>

#include "srkit/errors.hpp"
#include "srkit/folding.hpp"
#include "srkit/periodic.hpp"

using namespace srk;

TEST(PeriodicFunction, InterpolatesAndWraps) {
  const PeriodicFunction f(4.0, {0.0, 1.0, 2.0, 1.0});
  EXPECT_DOUBLE_EQ(f(0.5), 0.5);
  EXPECT_DOUBLE_EQ(f(3.5), 0.5);  // wraps back towards node 0
  EXPECT_DOUBLE_EQ(f(4.5), 0.5);
  EXPECT_DOUBLE_EQ(f(-0.5), 0.5);
  EXPECT_DOUBLE_EQ(f.period_integral(), 4.0);
}

TEST(PeriodicFunction, CumulativeAcrossPeriods) {
  const PeriodicFunction f(2.0, {1.0, 3.0});
  EXPECT_DOUBLE_EQ(f.period_integral(), 4.0);
  EXPECT_DOUBLE_EQ(f.cumulative(0.5), 0.5 * (1.0 + 2.0) / 2.0);
  EXPECT_NEAR(f.cumulative(10.5), 5 * 4.0 + f.cumulative(0.5), 1e-12);
  EXPECT_NEAR(f.cumulative(-1.5), -f.integral(-1.5, 0.0), 1e-12);
  EXPECT_NEAR(f.integral(-1.5, 0.0), f.integral(0.5, 2.0), 1e-12);
}

TEST(PeriodicFunction, RejectsBadInput) {
  EXPECT_THROW(PeriodicFunction(0.0, {1.0}), InvalidParams);
  EXPECT_THROW(PeriodicFunction(1.0, {}), EmptyInput);
}

TEST(PhaseFolder, IntervalSplitsAcrossBins) {
  PhaseFolder folder(4.0, 4);
  folder.add_interval(0.5, 6.5, 1.0);
  const auto r = folder.result();
  EXPECT_DOUBLE_EQ(r.weights[0], 1.5);
  EXPECT_DOUBLE_EQ(r.weights[1], 2.0);
  EXPECT_DOUBLE_EQ(r.weights[2], 1.5);
  EXPECT_DOUBLE_EQ(r.weights[3], 1.0);
  for (double v : r.values) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(PhaseFolder, CombineWeightsByData) {
  PhaseFolder a(1.0, 2), b(1.0, 2);
  a.add_sample(0.1, 1.0);
  b.add_sample(0.2, 4.0);
  b.add_sample(0.3, 4.0);
  const PhaseFoldedSignal s[] = {a.result(), b.result()};
  const auto c = combine(s);
  EXPECT_DOUBLE_EQ(c.values[0], 3.0);
  EXPECT_DOUBLE_EQ(c.weights[0], 3.0);
  EXPECT_DOUBLE_EQ(c.weights[1], 0.0);
}
