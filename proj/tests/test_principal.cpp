#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "oscpair/error.hpp"
#include "oscpair/principal.hpp"
#include "support.hpp"

using namespace oscpair;
using testing_support::cauchy_euler_pair;
using testing_support::default_pair;

namespace {

constexpr double kPi = std::numbers::pi;

double vbar(const PairState& s, const CombinationCoefficients& c) {
  return c.A * s.y1 * s.y1 + c.B * s.y2 * s.y2 + 2.0 * c.C * s.y1 * s.y2;
}

// Constrained minimum of c^T S c over AB - C^2 = 1 (S the detrended
// covariance) from the generalized
// eigenproblem S c = lambda M c, with M the matrix of the constraint form.
CombinationCoefficients eigen_oracle(const PairTrajectory& t, const Interval& w, std::size_t n) {
  Eigen::MatrixXd cols(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = w.a + (w.b - w.a) * static_cast<double>(i) / static_cast<double>(n - 1);
    const PairState s = t.sample(x);
    cols.row(i) << 2 * s.y1 * s.dy1, 2 * s.y2 * s.dy2, 2 * (s.dy1 * s.y2 + s.y1 * s.dy2);
  }
  // residual of each column about its least-squares quadratic in x
  Eigen::MatrixXd P(n, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = w.a + (w.b - w.a) * static_cast<double>(i) / static_cast<double>(n - 1);
    P.row(i) << 1.0, x - w.a, (x - w.a) * (x - w.a);
  }
  const Eigen::MatrixXd coef = P.colPivHouseholderQr().solve(cols);
  const Eigen::MatrixXd centered = cols - P * coef;
  const Eigen::Matrix3d S = centered.transpose() * centered / static_cast<double>(n - 3);
  Eigen::Matrix3d M;
  M << 0, 0.5, 0, 0.5, 0, 0, 0, 0, -1;
  Eigen::EigenSolver<Eigen::Matrix3d> es(M.inverse() * S);
  double best = INFINITY;
  CombinationCoefficients out;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(es.eigenvalues()[k].imag()) > 1e-12) continue;
    Eigen::Vector3d c = es.eigenvectors().col(k).real();
    const double form = c.dot(M * c);
    if (!(form > 0)) continue;
    c /= std::sqrt(form);
    if (c[0] < 0) c = -c;
    const double j = c.dot(S * c);
    if (j < best) {
      best = j;
      out = {c[0], c[1], c[2]};
    }
  }
  return out;
}

PairMatrix random_unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a) < 0.3) continue;
    return {a, b, c, (1.0 + b * c) / a};
  }
}

}  // namespace

TEST_CASE("transform_pair") {
  const auto t = default_pair(catalog_get("constant", {{"c", 1.0}}), 20.0);
  SUBCASE("rotation preserves v") {
    const double th = kPi / 4;
    const auto r = transform_pair(t, {std::cos(th), -std::sin(th), std::sin(th), std::cos(th)});
    for (std::size_t i = 0; i < t.size(); ++i) {
      const PairState a = t.states()[i], b = r.states()[i];
      CHECK(b.y1 * b.y1 + b.y2 * b.y2 == doctest::Approx(a.y1 * a.y1 + a.y2 * a.y2).epsilon(1e-14));
    }
    CHECK(r.wronskian() == doctest::Approx(t.wronskian()).epsilon(1e-14));
  }
  SUBCASE("shear keeps w and changes v") {
    const auto r = transform_pair(t, {1, 1, 0, 1});
    CHECK(r.wronskian() == doctest::Approx(t.wronskian()).epsilon(1e-14));
    CHECK(r.unit_wronskian());
    for (double x : linspace(0.1, 19.9, 37)) {
      const double s = std::sin(x), c = std::cos(x);
      const PairState st = r.sample(x);
      CHECK(st.y1 * st.y1 + st.y2 * st.y2 == doctest::Approx((s + c) * (s + c) + c * c).epsilon(1e-8));
    }
  }
  SUBCASE("scaling doubles w") {
    const auto r = transform_pair(t, {2, 0, 0, 1});
    CHECK(r.wronskian() == doctest::Approx(2 * t.wronskian()).epsilon(1e-14));
    CHECK_FALSE(r.unit_wronskian());
  }
  CHECK_THROWS_AS(transform_pair(t, {1, 2, 2, 4}), ConfigError);
}

TEST_CASE("coefficient algebra") {
  const PairMatrix m{1.5, -0.4, 0.7, 0.48};
  const auto c = coefficients_of(m);
  CHECK(c.determinant() == doctest::Approx(m.determinant() * m.determinant()).epsilon(1e-14));
  const auto e = matrix_for({2.0, 1.0, -1.0});
  CHECK(e.determinant() == doctest::Approx(1.0).epsilon(1e-14));
  const auto back = coefficients_of(e);
  CHECK(back.A == doctest::Approx(2.0));
  CHECK(back.B == doctest::Approx(1.0));
  CHECK(back.C == doctest::Approx(-1.0));
  // identity form on the transformed pair pulls back to the matrix's own form
  const auto p = pull_back({1.0, 1.0, 0.0}, m);
  CHECK(p.A == doctest::Approx(c.A));
  CHECK(p.B == doctest::Approx(c.B));
  CHECK(p.C == doctest::Approx(c.C));
  CHECK_THROWS_AS(matrix_for({1.0, 2.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(matrix_for({-1.0, -1.0, 0.0}), ConfigError);
}

TEST_CASE("decompose_oscillation on q = 1") {
  const auto t = default_pair(catalog_get("constant", {{"c", 1.0}}), 40.0);
  const Interval w{10.0, 40.0};
  const PhaseData ph = phase_unwrap(t, linspace(0.0, 40.0, 4001));
  SUBCASE("principal") {
    const auto d = decompose_oscillation(t, ph, {1, 1, 0}, w);
    CHECK(std::abs(d.k1) < 1e-8);
    CHECK(std::abs(d.k2) < 1e-8);
  }
  SUBCASE("(2, 1/2, 0)") {
    const auto d = decompose_oscillation(t, ph, {2, 0.5, 0}, w);
    CHECK(d.k1 == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(std::abs(d.k2) < 1e-8);
  }
  SUBCASE("(1, 2, 1)") {
    for (TrendBasis b : {TrendBasis::derivative, TrendBasis::polynomial}) {
      const auto d = decompose_oscillation(t, ph, {1, 2, 1}, w, b);
      CHECK(d.k1 == doctest::Approx(-1.0).epsilon(1e-6));
      CHECK(d.k2 == doctest::Approx(2.0).epsilon(1e-6));
    }
  }
  SUBCASE("short window") {
    CHECK_THROWS_AS(decompose_oscillation(t, ph, {1, 1, 0}, {10.0, 18.0}), ConfigError);
  }
}

TEST_CASE("find_principal on q = 1") {
  const auto t = default_pair(catalog_get("constant", {{"c", 1.0}}), 50.0);
  const Interval w = tail_window(t, 0.25);
  SUBCASE("already principal") {
    const auto r = find_principal(t, w);
    CHECK(r.coeffs.A == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.coeffs.B == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(r.coeffs.C) < 1e-6);
    CHECK(r.objective < 1e-12);
    CHECK(r.classification.tag == LimitClass::l_finite);
    REQUIRE(r.classification.L);
    CHECK(*r.classification.L == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("(sqrt2 sin, cos / sqrt2)") {
    const auto s = transform_pair(t, {std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)});
    const auto r = find_principal(s, w);
    CHECK(r.coeffs.A == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(r.coeffs.B == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(r.coeffs.C) < 1e-6);
    for (double x : linspace(w.a, w.b, 50)) CHECK(vbar(s.sample(x), r.coeffs) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("(sin, sin + cos)") {
    const auto s = transform_pair(t, {1, 0, 1, 1});
    CHECK(s.wronskian() == doctest::Approx(-1.0).epsilon(1e-12));
    const auto r = find_principal(s, w);
    CHECK(r.coeffs.A == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(r.coeffs.B == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.coeffs.C == doctest::Approx(-1.0).epsilon(1e-6));
  }
  CHECK_THROWS_AS(find_principal(transform_pair(t, {2, 0, 0, 1}), w), ConfigError);
}

TEST_CASE("find_principal matches the eigenproblem oracle") {
  std::mt19937_64 rng(7);
  struct Run {
    std::string name;
    Params p;
    double xmax;
  };
  for (const Run& run : {Run{"gen-airy", {{"nu", 1.0 / 3.0}}, 200.0}, Run{"inverse-x", {}, 400.0}}) {
    INFO(run.name);
    const auto t = default_pair(catalog_get(run.name, run.p), run.xmax);
    const auto s = transform_pair(t, random_unimodular(rng));
    const Interval w = tail_window(s, 0.25);
    const auto r = find_principal(s, w);
    const auto o = eigen_oracle(s, w, 20000);
    CHECK(r.coeffs.A == doctest::Approx(o.A).epsilon(1e-6));
    CHECK(r.coeffs.B == doctest::Approx(o.B).epsilon(1e-6));
    CHECK(r.coeffs.C == doctest::Approx(o.C).epsilon(1e-6));
  }
}

TEST_CASE("objective invariance under a change of basis") {
  const auto t = default_pair(catalog_get("gen-airy", {{"nu", 1.0 / 3.0}}), 100.0);
  const Interval w{60.0, 100.0};
  std::mt19937_64 rng(11);
  for (int k = 0; k < 4; ++k) {
    const PairMatrix m = random_unimodular(rng);
    const auto s = transform_pair(t, m);
    const CombinationCoefficients c{1.3, (1.0 + 0.2 * 0.2) / 1.3, 0.2};
    const double js = oscillation_objective(s, w, c);
    const double jt = oscillation_objective(t, w, pull_back(c, m));
    CHECK(js == doctest::Approx(jt).epsilon(1e-8));
  }
}

TEST_CASE("classify on principal pairs") {
  SUBCASE("q = 1") {
    const auto t = default_pair(catalog_get("constant", {{"c", 1.0}}), 50.0);
    const auto c = classify(amplitude_series(t, linspace(0.0, 50.0, 2001)), {37.5, 50.0});
    CHECK(c.tag == LimitClass::l_finite);
    REQUIRE(c.L);
    CHECK(*c.L == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("gen-airy") {
    const auto t = default_pair(catalog_get("gen-airy", {{"nu", 1.0 / 3.0}}), 200.0);
    const auto r = find_principal(t, tail_window(t, 0.25));
    INFO(r.classification.diagnostics);
    CHECK(r.classification.tag == LimitClass::l_zero);
    REQUIRE(r.classification.K);
    CHECK(std::abs(*r.classification.K) < 1e-4);
  }
  SUBCASE("cauchy-euler") {
    const auto t = cauchy_euler_pair(1.0, 500.0);
    const auto r = find_principal(t, tail_window(t, 0.25));
    INFO(r.classification.diagnostics);
    INFO(r.diagnostics);
    CHECK(r.classification.tag == LimitClass::l_infinite);
    REQUIRE(r.classification.K);
    CHECK(*r.classification.K == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-4));
  }
  SUBCASE("orthogonal invariance") {
    const auto t = default_pair(catalog_get("inverse-x", {}), 400.0);
    const auto g = linspace(1.0, 400.0, 8001);
    const auto base = classify(amplitude_series(t, g), {300.0, 400.0});
    for (double th : {0.3, 1.1, 2.5}) {
      const auto r = transform_pair(t, {std::cos(th), -std::sin(th), std::sin(th), std::cos(th)});
      const auto c = classify(amplitude_series(r, g), {300.0, 400.0});
      CHECK(c.tag == base.tag);
      if (base.K && c.K) CHECK(*c.K == doctest::Approx(*base.K).epsilon(1e-6));
      if (base.L && c.L) CHECK(*c.L == doctest::Approx(*base.L).epsilon(1e-6));
    }
  }
}

TEST_CASE("residual separates the principal member") {
  // A shear of the gen-airy principal pair also has v -> 0, but its v' oscillates.
  const auto t = default_pair(catalog_get("gen-airy", {{"nu", 1.0 / 3.0}}), 200.0);
  const Interval w = tail_window(t, 0.25);
  const auto r = find_principal(t, w);
  const auto p = transform_pair(t, r.matrix);
  const auto sheared = transform_pair(p, {1, 0.5, 0, 1});
  const PhaseData ph = phase_unwrap(sheared, linspace(w.a, w.b, 5000));
  const auto d = decompose_oscillation(sheared, ph, {1, 1, 0}, w, TrendBasis::polynomial);
  CHECK(d.k1 * d.k1 + d.k2 * d.k2 > 1e-4);
  CHECK(r.k1_est * r.k1_est + r.k2_est * r.k2_est < 1e-8);
}

TEST_CASE("sufficient_conditions") {
  SUBCASE("gen-airy") {
    const auto s = sufficient_conditions(catalog_get("gen-airy", {{"nu", 1.0 / 3.0}}), {1.0, 200.0});
    CHECK(s.corollary1.verdict == Verdict::holds);
    CHECK(s.corollary2.verdict == Verdict::fails);
  }
  SUBCASE("cauchy-euler") {
    const auto s = sufficient_conditions(catalog_get("cauchy-euler", {{"gamma", 1.0}}), {1.0, 500.0});
    CHECK(s.corollary2.verdict == Verdict::fails);
    CHECK(s.corollary2.failing_points == s.corollary2.points);
    REQUIRE(s.corollary2.fails_at);
    CHECK(*s.corollary2.fails_at == doctest::Approx(1.0));
  }
  SUBCASE("constant") {
    const auto s = sufficient_conditions(catalog_get("constant", {{"c", 1.0}}), {0.0, 50.0});
    CHECK(s.corollary2.verdict == Verdict::holds);
    CHECK(s.remark_finite_q.verdict == Verdict::holds);
    CHECK(s.corollary1.verdict == Verdict::fails);
  }
  CHECK_THROWS_AS(sufficient_conditions(catalog_get("constant", {{"c", 1.0}}), {0.0, 50.0}, 8), ConfigError);
}
