#include "oscpair/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "oscpair/error.hpp"
#include "oscpair/integrate.hpp"
#include "oscpair/qfunc.hpp"

namespace oscpair {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSwitch = 2.0;

void check_order(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) throw ConfigError("Bessel order must lie in (0, 1)");
}

void check_argument(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("Bessel argument must be positive");
}

struct SeriesValue {
  double f = 0.0;
  double df = 0.0;
};

// J_mu(t) and J_mu'(t) from the ascending series; mu may be negative.
SeriesValue series_j(double mu, double t) {
  const double half = 0.5 * t;
  const double z = -half * half;
  double term = std::pow(half, mu) / std::tgamma(mu + 1.0);
  SeriesValue out;
  for (int k = 0; k < 200; ++k) {
    out.f += term;
    out.df += (2.0 * k + mu) / t * term;
    if (std::abs(term) < 1e-17 * std::abs(out.f)) break;
    term *= z / ((k + 1.0) * (k + 1.0 + mu));
  }
  return out;
}

struct JY {
  double J, dJ, Y, dY;
};

JY series_jy(double nu, double t) {
  const SeriesValue jp = series_j(nu, t), jm = series_j(-nu, t);
  const double c = std::cos(nu * kPi), s = std::sin(nu * kPi);
  return {jp.f, jp.df, (jp.f * c - jm.f) / s, (jp.df * c - jm.df) / s};
}

EquationModel normal_form(double nu, double t0) {
  const double a = nu * nu - 0.25;
  return EquationModel("bessel-normal-form", {{"nu", nu}}, t0, [a](double t) {
    const double t2 = t * t;
    return QValues{1.0 - a / t2, 2.0 * a / (t2 * t), -6.0 * a / (t2 * t2)};
  });
}

// u = sqrt(t) f, u' = f / (2 sqrt t) + sqrt(t) f'.
InitialCondition lift(double t, double f, double df) {
  const double r = std::sqrt(t);
  return {r * f, 0.5 * f / r + r * df};
}

std::vector<BesselValue> propagate(double nu, std::span<const double> ts, double t_seed) {
  const JY s = series_jy(nu, t_seed);
  IntegratorOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-15;
  const PairTrajectory traj =
      integrate_pair(normal_form(nu, t_seed), lift(t_seed, s.J, s.dJ), lift(t_seed, s.Y, s.dY), ts.back(), opt);
  std::vector<BesselValue> out;
  out.reserve(ts.size());
  for (double t : ts) {
    const PairState u = traj.sample(t);
    const double r = std::sqrt(t);
    out.push_back({nu, t, u.y1 / r, u.y2 / r, BesselMethod::propagated});
  }
  return out;
}

}  // namespace

std::string to_string(BesselMethod m) { return m == BesselMethod::series ? "series" : "propagated"; }

BesselValue bessel_jy(double nu, double t) {
  const double ts[] = {t};
  return bessel_jy_grid(nu, ts).front();
}

std::vector<BesselValue> bessel_jy_grid(double nu, std::span<const double> ts) {
  check_order(nu);
  std::vector<BesselValue> out;
  out.reserve(ts.size());
  std::vector<double> far;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    check_argument(ts[i]);
    if (i > 0 && !(ts[i] > ts[i - 1])) throw ConfigError("Bessel grid must be strictly increasing");
    if (ts[i] <= kSwitch) {
      const JY v = series_jy(nu, ts[i]);
      out.push_back({nu, ts[i], v.J, v.Y, BesselMethod::series});
    } else {
      far.push_back(ts[i]);
    }
  }
  if (!far.empty()) {
    const auto tail = propagate(nu, far, kSwitch);
    out.insert(out.end(), tail.begin(), tail.end());
  }
  return out;
}

BesselValue bessel_jy_propagated(double nu, double t, double t_seed) {
  check_order(nu);
  check_argument(t_seed);
  if (!(t_seed <= kSwitch)) throw ConfigError("seed point must lie in the series range (0, 2]");
  if (!(t > t_seed)) throw ConfigError("propagation target must exceed the seed point");
  const double ts[] = {t};
  return propagate(nu, ts, t_seed).front();
}

double bessel_wronskian(double nu, double t) {
  check_order(nu);
  check_argument(t);
  if (t <= kSwitch) {
    const JY v = series_jy(nu, t);
    return t * (v.J * v.dY - v.dJ * v.Y);
  }
  const JY s = series_jy(nu, kSwitch);
  IntegratorOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-15;
  // Without projection the integrator does not enforce the Wronskian, so the check is independent.
  opt.project_wronskian = false;
  const PairTrajectory traj =
      integrate_pair(normal_form(nu, kSwitch), lift(kSwitch, s.J, s.dJ), lift(kSwitch, s.Y, s.dY), t, opt);
  // The lift is unimodular up to the factor t: u1 u2' - u1' u2 = t (J Y' - J' Y).
  return wronskian(traj.sample(t));
}

double modulus(double nu, double t) {
  const BesselValue v = bessel_jy(nu, t);
  return t * (v.J * v.J + v.Y * v.Y);
}

double example1_v(double nu, double x) {
  if (!(nu > 0.0 && nu <= 0.5)) throw ConfigError("example1_v needs 0 < nu <= 1/2");
  if (!(x > 0.0)) throw ConfigError("example1_v needs x > 0");
  const double t = 2.0 * nu * std::pow(x, 1.0 / (2.0 * nu));
  const BesselValue v = bessel_jy(nu, t);
  return x * (v.J * v.J + v.Y * v.Y);
}

}  // namespace oscpair
