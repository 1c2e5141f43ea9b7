#include "srkit/rng.hpp"

#include <numbers>

namespace srk::detail {

namespace {

ZigguratTables build_tables() {
  constexpr double r = 3.6541528853610088;
  auto pdf = [](double x) { return std::exp(-0.5 * x * x); };
  // Common area of every layer: base rectangle plus the tail beyond r.
  const double v = r * pdf(r) + std::sqrt(std::numbers::pi / 2.0) * std::erfc(r / std::numbers::sqrt2);

  ZigguratTables t{};
  t.x[0] = v / pdf(r);
  t.x[1] = r;
  for (std::size_t i = 1; i < 255; ++i) {
    t.x[i + 1] = std::sqrt(-2.0 * std::log(v / t.x[i] + pdf(t.x[i])));
  }
  t.x[256] = 0.0;
  for (std::size_t i = 0; i < t.x.size(); ++i) t.f[i] = pdf(t.x[i]);
  return t;
}

}  // namespace

const ZigguratTables& ziggurat_tables() {
  static const ZigguratTables tables = build_tables();
  return tables;
}

}  // namespace srk::detail
