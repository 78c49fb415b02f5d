#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oscpair/error.hpp"
#include "oscpair/integrate.hpp"

using namespace oscpair;

namespace {

const EquationModel& unit_constant() {
  static const EquationModel m = catalog_get("constant", {{"c", 1.0}});
  return m;
}

double max_wronskian_drift(const PairTrajectory& t) {
  double drift = 0.0;
  for (const PairState& s : t.states()) drift = std::max(drift, std::abs(wronskian(s) - t.wronskian()));
  return drift;
}

double max_sin_cos_error(const PairTrajectory& t) {
  double err = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = t.mesh()[i];
    const PairState& s = t.states()[i];
    err = std::max({err, std::abs(s.y1 - std::sin(x)), std::abs(s.dy1 - std::cos(x)), std::abs(s.y2 - std::cos(x)),
                    std::abs(s.dy2 + std::sin(x))});
  }
  return err;
}

}  // namespace

TEST_CASE("constant q = 1 reproduces sin and cos") {
  const auto t = integrate_pair(unit_constant(), {0.0, 1.0}, {1.0, 0.0}, std::numbers::pi);
  const PairState mid = t.sample(std::numbers::pi / 2);
  CHECK(std::abs(mid.y1 - 1.0) <= 1e-9);
  CHECK(std::abs(mid.y2) <= 1e-9);
  const PairState one = t.sample(1.0);
  CHECK(std::abs(one.y1 - std::sin(1.0)) <= 1e-9);
  CHECK(std::abs(one.dy1 - std::cos(1.0)) <= 1e-9);
  CHECK(std::abs(one.y2 - std::cos(1.0)) <= 1e-9);
  CHECK(std::abs(one.dy2 + std::sin(1.0)) <= 1e-9);
  CHECK(t.wronskian() == -1.0);
  CHECK(t.x_begin() == 0.0);
  CHECK(t.x_end() == std::numbers::pi);
}

TEST_CASE("sampling at a node returns the stored state exactly") {
  const auto t = integrate_pair(unit_constant(), {0.0, 1.0}, {1.0, 0.0}, 10.0);
  for (std::size_t i = 0; i < t.size(); i += 7) {
    const PairState s = t.sample(t.mesh()[i]);
    const PairState& r = t.states()[i];
    CHECK(s.y1 == r.y1);
    CHECK(s.dy1 == r.dy1);
    CHECK(s.y2 == r.y2);
    CHECK(s.dy2 == r.dy2);
  }
  CHECK_THROWS_AS(t.sample(-0.1), ConfigError);
  CHECK_THROWS_AS(t.sample(10.5), ConfigError);
}

TEST_CASE("cauchy-euler against the closed form") {
  const auto m = catalog_get("cauchy-euler", {{"gamma", 1.0}});
  const double s = m.param("s");
  // y1 = x^(1/2) sin(s log x), y2 = x^(1/2) cos(s log x) at x0 = 1
  const auto t = integrate_pair(m, {0.0, s}, {1.0, 0.5}, 50.0);
  const double xq = std::exp(std::numbers::pi / (2.0 * s));
  const PairState st = t.sample(xq);
  const double y1 = std::sqrt(xq) * std::sin(s * std::log(xq));
  CHECK(std::abs(st.y1 - y1) <= 1e-7 * std::abs(y1));
  CHECK(t.wronskian() == doctest::Approx(-s).epsilon(1e-15));
}

TEST_CASE("gen-airy Wronskian drift") {
  const auto m = catalog_get("gen-airy", {{"nu", 1.0 / 3.0}});
  SUBCASE("with projection") {
    const auto t = integrate_pair(m, {0.3, -1.2}, {2.0, 0.7}, 200.0);
    CHECK(max_wronskian_drift(t) <= 1e-8);
  }
  SUBCASE("plain Runge-Kutta stays within the Abel bound") {
    IntegratorOptions opt;
    opt.project_wronskian = false;
    const auto t = integrate_pair(m, {0.3, -1.2}, {2.0, 0.7}, 200.0, opt);
    const double w = std::abs(t.wronskian());
    CHECK(max_wronskian_drift(t) <= 100.0 * opt.rtol * (1.0 + w));
  }
}

TEST_CASE("midpoint residual of the dense output") {
  for (const auto& m : {unit_constant(), catalog_get("gen-airy", {{"nu", 1.0 / 3.0}}),
                        catalog_get("inverse-x", {}), catalog_get("cauchy-euler", {{"gamma", 1.0}})}) {
    const double xmax = m.name() == "gen-airy" ? 200.0 : 100.0;
    const auto t = integrate_pair(m, {0.0, 1.0}, {1.0, 0.0}, xmax);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      const double xm = 0.5 * (t.mesh()[i] + t.mesh()[i + 1]);
      const auto [j1, j2] = t.sample_jet(xm);
      const double q = m.q(xm);
      for (const SolutionJet& j : {j1, j2}) {
        const double scale = std::max(std::abs(j.y), std::abs(j.yp));
        worst = std::max({worst, std::abs(j.d2y + q * j.y) / scale, std::abs(j.dyp + q * j.y) / scale});
      }
    }
    INFO(m.name(), " worst midpoint residual ", worst);
    CHECK(worst <= 10.0 * t.options().rtol);
  }
}

TEST_CASE("halving rtol halves the closed-form error") {
  IntegratorOptions coarse;
  coarse.rtol = 1e-7;
  coarse.atol = 1e-12;
  IntegratorOptions fine = coarse;
  fine.rtol = coarse.rtol / 2.0;
  const double e1 = max_sin_cos_error(integrate_pair(unit_constant(), {0.0, 1.0}, {1.0, 0.0}, 50.0, coarse));
  const double e2 = max_sin_cos_error(integrate_pair(unit_constant(), {0.0, 1.0}, {1.0, 0.0}, 50.0, fine));
  INFO("coarse ", e1, " fine ", e2);
  CHECK(e1 / e2 >= 2.0);
}

TEST_CASE("time reversal on [1, 10]") {
  // q constant is reflection invariant: u(t) = y(11 - t) solves the same
  // equation, so integrating u forward retraces y backward.
  const auto m = unit_constant().with_x0(1.0);
  const InitialCondition a{0.4, -0.9}, b{1.1, 0.3};
  const auto fwd = integrate_pair(m, a, b, 10.0);
  const PairState end = fwd.states().back();
  const auto back = integrate_pair(m, {end.y1, -end.dy1}, {end.y2, -end.dy2}, 10.0);
  const PairState r = back.states().back();
  const double tol = 100.0 * fwd.options().rtol;
  CHECK(std::abs(r.y1 - a.y) <= tol);
  CHECK(std::abs(-r.dy1 - a.dy) <= tol);
  CHECK(std::abs(r.y2 - b.y) <= tol);
  CHECK(std::abs(-r.dy2 - b.dy) <= tol);
}

TEST_CASE("normalize_unit_wronskian") {
  SUBCASE("already unit") {
    const auto t = integrate_pair(unit_constant(), {0.0, 1.0}, {1.0, 0.0}, 5.0);
    const auto n = normalize_unit_wronskian(t);
    CHECK(n.wronskian() == -1.0);
    CHECK(n.states()[3].y1 == t.states()[3].y1);
  }
  SUBCASE("(2 sin, cos)") {
    const auto t = integrate_pair(unit_constant(), {0.0, 2.0}, {1.0, 0.0}, 5.0);
    CHECK(t.wronskian() == -2.0);
    const auto n = normalize_unit_wronskian(t);
    CHECK(n.wronskian() == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(n.unit_wronskian());
    const PairState s = n.sample(1.0);
    CHECK(s.y1 == doctest::Approx(std::sqrt(2.0) * std::sin(1.0)).epsilon(1e-9));
    CHECK(s.y2 == doctest::Approx(std::cos(1.0) / std::sqrt(2.0)).epsilon(1e-9));
  }
}

TEST_CASE("integrate_pair errors") {
  CHECK_THROWS_AS(integrate_pair(unit_constant(), {1.0, 2.0}, {2.0, 4.0}, 5.0), ConfigError);
  CHECK_THROWS_AS(integrate_pair(unit_constant(), {0.0, 1.0}, {1.0, 0.0}, 0.0), ConfigError);
  IntegratorOptions bad;
  bad.rtol = 1e-2;
  CHECK_THROWS_AS(integrate_pair(unit_constant(), {0.0, 1.0}, {1.0, 0.0}, 5.0, bad), ConfigError);
  // q blows up at x = 2: the step size collapses there
  const auto blow = parse_q("1/(2-x)^4", {}, 0.0);
  CHECK_THROWS_AS(integrate_pair(blow, {0.0, 1.0}, {1.0, 0.0}, 3.0), NumericError);
}
