#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "oscpair/error.hpp"
#include "oscpair/zeros.hpp"
#include "support.hpp"

using namespace oscpair;
using testing_support::cauchy_euler_pair;
using testing_support::default_pair;

namespace {

constexpr double kPi = std::numbers::pi;

PairTrajectory principal_of(const PairTrajectory& t) {
  return transform_pair(t, find_principal(t, tail_window(t, 0.25)).matrix);
}

}  // namespace

TEST_CASE("zeros_of on q = 1") {
  const auto t = default_pair(catalog_get("constant", {{"c", 1.0}}), 12.0);
  const auto z = zeros_of(t, ZeroTarget::y1, {0.1, 10.0});
  REQUIRE(z.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(z[k] - (k + 1) * kPi) < 1e-10);
  const auto c = zeros_of(t, ZeroTarget::dy1, {0.1, 10.0});
  REQUIRE(c.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(c[k] - (k + 0.5) * kPi) < 1e-10);
  CHECK(zeros_of(t, ZeroTarget::y1, {0.1, 3.0}).empty());
  CHECK_THROWS_AS(zeros_of(t, ZeroTarget::y1, {0.0, 13.0}), ConfigError);
}

TEST_CASE("zeros_of on cauchy-euler: geometric spacing") {
  const double xmax = std::exp(4 * kPi);
  const auto t = cauchy_euler_pair(1.0, xmax);
  const double s = std::sqrt(3.0) / 2.0;
  const auto z = zeros_of(t, ZeroTarget::y2, {1.0, xmax});
  REQUIRE(z.size() >= 3);
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    CHECK(z[j + 1] / z[j] == doctest::Approx(std::exp(kPi / s)).epsilon(1e-8));
  }
}

TEST_CASE("interlacing and counting on catalog runs") {
  struct Run {
    std::string name;
    Params p;
    double xmax;
  };
  for (const Run& run : {Run{"constant", {{"c", 2.0}}, 50.0}, Run{"gen-airy", {{"nu", 1.0 / 3.0}}, 200.0},
                         Run{"inverse-x", {}, 400.0}}) {
    INFO(run.name);
    const auto t = default_pair(catalog_get(run.name, run.p), run.xmax);
    const Interval span{t.x_begin(), t.x_end()};
    const auto z1 = zeros_of(t, ZeroTarget::y1, span);
    const auto z2 = zeros_of(t, ZeroTarget::y2, span);
    for (std::size_t j = 0; j + 1 < z1.size(); ++j) {
      const auto n = std::count_if(z2.begin(), z2.end(), [&](double x) { return x > z1[j] && x < z1[j + 1]; });
      CHECK(n == 1);
    }
    const PhaseData ph = phase_unwrap(t, std::vector<double>{span.a, span.b});
    const double turns = std::floor(std::abs(ph.alpha[1] - ph.alpha[0]) / kPi);
    CHECK(std::abs(static_cast<double>(z1.size()) - turns) <= 1.0);
  }
}

TEST_CASE("gap_table") {
  SUBCASE("q = 1") {
    const auto t = default_pair(catalog_get("constant", {{"c", 1.0}}), 40.0);
    const auto ph = phase_unwrap(t, linspace(0.0, 40.0, 401));
    const auto g = gap_table(t, ph, {0.0, 40.0});
    REQUIRE(g.rows.size() >= 5);
    for (const auto& r : g.rows) {
      CHECK(r.gap < 1e-9);
      CHECK(r.phase_gap < 1e-9);
    }
    const std::string csv = g.to_csv();
    CHECK(csv.rfind("j,x_crit,x_zero,gap,phase_gap\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(g.rows.size() + 1));
  }
  SUBCASE("gen-airy principal pair") {
    const auto p = principal_of(default_pair(catalog_get("gen-airy", {{"nu", 1.0 / 3.0}}), 200.0));
    const auto ph = phase_unwrap(p, linspace(1.0, 200.0, 2000));
    const auto g = gap_table(p, ph, {1.0, 200.0});
    REQUIRE(g.rows.size() >= 30);
    for (std::size_t i = g.rows.size() - 10; i < g.rows.size(); ++i) CHECK(g.rows[i].gap < g.rows[i - 1].gap);
    CHECK(g.rows.back().gap <= 1e-4);
    CHECK(g.rows.back().gap < g.rows.front().gap / 10);
    for (std::size_t i = 1; i < g.rows.size(); ++i) CHECK(g.rows[i].x_crit > g.rows[i - 1].x_crit);
  }
  SUBCASE("cauchy-euler principal pair") {
    const double xmax = 1e9;
    const auto t = cauchy_euler_pair(1.0, xmax);
    const auto ph = phase_unwrap(t, logspace(1.0, xmax, 400));
    const auto g = gap_table(t, ph, {1.0, xmax});
    REQUIRE(g.rows.size() >= 3);
    for (const auto& r : g.rows) CHECK(r.phase_gap == doctest::Approx(kPi / 6).epsilon(1e-6));
  }
  SUBCASE("too few zeros") {
    const auto t = default_pair(catalog_get("constant", {{"c", 1.0}}), 10.0);
    const auto ph = phase_unwrap(t, linspace(0.0, 10.0, 101));
    CHECK_THROWS_AS(gap_table(t, ph, {0.0, 10.0}), ConfigError);
  }
}

TEST_CASE("competitors: y2 has the smallest tail gap") {
  const auto p = principal_of(default_pair(catalog_get("gen-airy", {{"nu", 1.0 / 3.0}}), 200.0));
  const auto gaps = competitor_tail_gaps(p, {1.0, 200.0});
  REQUIRE(gaps.size() == 12);
  const auto best = std::min_element(gaps.begin(), gaps.end()) - gaps.begin();
  CHECK(best == 6);
}

TEST_CASE("critical_point_residual") {
  SUBCASE("q = 1") {
    const auto t = default_pair(catalog_get("constant", {{"c", 1.0}}), 30.0);
    const auto ph = phase_unwrap(t, linspace(0.0, 30.0, 301));
    const auto r = critical_point_residual(t, ph, zeros_of(t, ZeroTarget::dy1, {0.0, 30.0}));
    REQUIRE(r.lhs.size() == 10);
    for (std::size_t i = 0; i < r.lhs.size(); ++i) CHECK(std::abs(r.lhs[i]) < 1e-9);
    CHECK(r.max < 1e-9);
  }
  SUBCASE("cauchy-euler") {
    const auto t = cauchy_euler_pair(1.0, 1e6);
    const auto ph = phase_unwrap(t, logspace(1.0, 1e6, 200));
    const auto r = critical_point_residual(t, ph, zeros_of(t, ZeroTarget::dy1, {1.0, 1e6}));
    REQUIRE(!r.lhs.empty());
    for (std::size_t i = 0; i < r.lhs.size(); ++i) {
      CHECK(r.lhs[i] == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-7));
      CHECK(r.rhs[i] == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-7));
    }
  }
  SUBCASE("gen-airy") {
    const auto t = default_pair(catalog_get("gen-airy", {{"nu", 1.0 / 3.0}}), 60.0);
    const auto ph = phase_unwrap(t, linspace(1.0, 60.0, 600));
    auto x = zeros_of(t, ZeroTarget::dy1, {1.0, 60.0});
    REQUIRE(x.size() >= 30);
    x.resize(30);
    CHECK(critical_point_residual(t, ph, x).max <= 1e-6);
  }
}
