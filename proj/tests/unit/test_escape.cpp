#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <gtest/gtest.h>

#include "srkit/errors.hpp"
#include "srkit/escape.hpp"

using namespace srk;

namespace {

constexpr double kPeriod = 10.0;

// Opposite cosine modulations: R_lr(t) = R_rl(t + T/2), as for phi = 0.
RateTable modulated(std::size_t n = 256, double base = 0.3, double depth = 0.8) {
  std::vector<double> lr(n), rl(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double c = std::cos(2 * std::numbers::pi * j / n);
    lr[j] = base * (1 + depth * c);
    rl[j] = base * (1 - depth * c);
  }
  return RateTable(kPeriod, lr, rl);
}

double integrate(auto f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

// Gauss-Legendre on every piece between consecutive rate grid nodes, where the
// density is smooth.
double integrate_cells(auto f, double a, double b, double spacing) {
  double total = 0.0;
  double from = a;
  while (from < b) {
    double next = (std::floor(from / spacing) + 1) * spacing;
    if (next <= from) next += spacing;
    const double to = std::min(b, next);
    total += boost::math::quadrature::gauss<double, 15>::integrate(f, from, to);
    from = to;
  }
  return total;
}

}  // namespace

TEST(ConditionalDist, ConstantRateIsExponential) {
  const RateTable t(kPeriod, {0.4}, {0.4});
  const ConditionalEscapeDist d(t, Direction::LeftToRight, 3.0);
  for (double s : {0.0, 0.5, 2.0, 7.5}) {
    EXPECT_NEAR(d.cdf(3.0 + s), 1 - std::exp(-0.4 * s), 1e-14);
    EXPECT_NEAR(d.pdf(3.0 + s), 0.4 * std::exp(-0.4 * s), 1e-14);
  }
  EXPECT_EQ(d.cdf(2.0), 0.0);
  EXPECT_NEAR(d.quantile(0.5), 3.0 + std::log(2.0) / 0.4, 1e-9);
  EXPECT_NEAR(d.truncation_time(), 3.0 + 40 / 0.4, 1e-8);
}

TEST(ConditionalDist, PdfIsNormalised) {
  const RateTable t = modulated();
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> uu(0, kPeriod);
  for (int i = 0; i < 20; ++i) {
    const Direction dir = i % 2 ? Direction::LeftToRight : Direction::RightToLeft;
    const ConditionalEscapeDist d(t, dir, uu(gen));
    // The hazard grows by 3 each period; 20 periods leave exp(-60).
    const double mass =
        integrate_cells([&](double s) { return d.pdf(s); }, d.u(), d.u() + 20 * kPeriod, kPeriod / 256);
    EXPECT_NEAR(mass, 1.0, 1e-8);
  }
}

TEST(ConditionalDist, CdfDerivativeIsPdf) {
  const RateTable t = modulated();
  const ConditionalEscapeDist d(t, Direction::LeftToRight, 1.7);
  for (double s = 0.05; s < 25; s += 0.9) {
    const double x = d.u() + s;
    const double h = 1e-5;
    const double fd = (d.cdf(x + h) - d.cdf(x - h)) / (2 * h);
    EXPECT_NEAR(fd, d.pdf(x), 1e-4 * d.pdf(x) + 1e-12);
  }
}

TEST(ConditionalDist, InverseSamplingMatchesCdf) {
  const RateTable t = modulated();
  const ConditionalEscapeDist d(t, Direction::RightToLeft, 4.0);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> p(0, 1);
  const std::vector<double> edges{4.0, 5.0, 6.0, 7.5, 9.0, 11.0, 14.0, 18.0, 1e9};
  std::vector<int> counts(edges.size() - 1, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = d.quantile(p(gen));
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
      if (x >= edges[b] && x < edges[b + 1]) ++counts[b];
    }
  }
  double chi2 = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    const double e = n * (d.cdf(std::min(edges[b + 1], d.truncation_time())) - d.cdf(edges[b]));
    chi2 += (counts[b] - e) * (counts[b] - e) / e;
  }
  const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001);
}

TEST(ConditionalDist, QuantileInvertsCdf) {
  const RateTable t = modulated();
  const ConditionalEscapeDist d(t, Direction::LeftToRight, 0.0);
  for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999999}) EXPECT_NEAR(d.cdf(d.quantile(p)), p, 1e-10);
  EXPECT_DOUBLE_EQ(d.quantile(1.0), d.truncation_time());
}

TEST(ConditionalDist, HalfPeriodShift) {
  const RateTable t = modulated();
  for (double u : {0.0, 1.3, 6.1}) {
    const ConditionalEscapeDist lr(t, Direction::LeftToRight, u);
    const ConditionalEscapeDist rl(t, Direction::RightToLeft, u + kPeriod / 2);
    for (double s : {0.2, 3.0, 11.0}) {
      EXPECT_NEAR(lr.cdf(u + s), rl.cdf(u + kPeriod / 2 + s), 1e-12);
      EXPECT_NEAR(conditional_pdf(lr, u + s), conditional_pdf(rl, u + kPeriod / 2 + s), 1e-12);
    }
  }
}

TEST(TotalPdf, PerfectPhaseIsTheRightWellDensity) {
  const RateTable t = modulated();
  const ConditionalEscapeDist rl(t, Direction::RightToLeft, 0.0);
  for (double s : {0.1, 2.0, 9.0}) EXPECT_DOUBLE_EQ(total_pdf(t, PerfectPhase{}, s), rl.pdf(s));
  EXPECT_EQ(total_pdf(t, PerfectPhase{}, -1.0), 0.0);
}

TEST(TotalPdf, SpikeDensityReducesToPerfectPhase) {
  const RateTable t = modulated();
  const std::size_t n = 100;
  GridDensity g{kPeriod, std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
  g.m_minus[n / 2] = n / kPeriod;
  g.m_plus[0] = g.m_plus[n] = n / kPeriod;
  for (double s : {0.1, 2.0, 9.0, 17.0}) EXPECT_NEAR(total_pdf(t, g, s), total_pdf(t, PerfectPhase{}, s), 1e-12);
}

TEST(TotalPdf, GridDensityValidation) {
  GridDensity g{kPeriod, {0.1, 0.1, 0.1}, {0.1, 0.1}};
  EXPECT_THROW(g.validate(), InvalidParams);
  g.m_plus = {0.1, 0.1, 0.1};
  EXPECT_NO_THROW(g.validate());
  g.m_plus = {0.2, 0.1, 0.1};
  EXPECT_THROW(g.validate(), InvalidParams);
  g.m_plus = {0.3, -0.1, 0.3};
  EXPECT_THROW(g.validate(), InvalidParams);
}

TEST(TotalPdf, EmpiricalModelIsNormalised) {
  const RateTable t = modulated();
  const std::vector<EscapeRecord> recs{{Well::Left, 1.0, 4.0}, {Well::Right, 4.0, 12.0}, {Well::Left, 12.0, 13.0}};
  const auto model = empirical_phases(recs);
  EXPECT_EQ(model.left_u.size(), 2u);
  EXPECT_EQ(model.right_u.size(), 1u);
  double mass = 0.0;
  for (int k = 0; k < 20; ++k) {
    mass += integrate([&](double s) { return total_pdf(t, model, s); }, k * kPeriod, (k + 1) * kPeriod, 20000);
  }
  EXPECT_NEAR(mass, 1.0, 1e-7);
  EXPECT_THROW(total_pdf(t, EmpiricalPhases{}, 1.0), EmptyInput);
}

TEST(Histogram, BinsDurationsInPeriods) {
  const std::vector<EscapeRecord> recs{{Well::Left, 0.0, 5.0}, {Well::Right, 5.0, 6.0}, {Well::Left, 6.0, 6.0}};
  const auto h = histogram(recs, kPeriod, 0.1);
  EXPECT_EQ(h.n, 3u);
  ASSERT_GE(h.counts.size(), 6u);
  EXPECT_EQ(h.counts[5], 1u);
  EXPECT_EQ(h.counts[1], 1u);
  EXPECT_EQ(h.counts[0], 1u);
  double area = 0.0;
  for (std::size_t j = 0; j < h.counts.size(); ++j) area += h.density(j) * h.bin_width;
  EXPECT_NEAR(area, 1.0, 1e-12);
  ASSERT_EQ(h.scatter.size(), 3u);
  EXPECT_DOUBLE_EQ(h.scatter[1].phase_in, 0.5);
  EXPECT_NEAR(h.scatter[1].phase_escape, 0.1, 1e-15);
  EXPECT_THROW(histogram(std::vector<EscapeRecord>{}, kPeriod), EmptyInput);
}
