#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "oscpair/error.hpp"
#include "oscpair/pipeline.hpp"
#include "oscpair/specfun.hpp"

namespace oscpair {

namespace {

constexpr double kPi = std::numbers::pi;

struct Run {
  std::string eq;
  Params params;
  double xmax;
};

const std::vector<Run>& catalog_runs() {
  static const std::vector<Run> runs = {
      {"constant", {{"c", 1.0}}, 50.0},
      {"gen-airy", {{"nu", 1.0 / 3.0}}, 200.0},
      {"inverse-x", {}, 400.0},
      {"cauchy-euler", {{"gamma", 1.0}}, 500.0},
  };
  return runs;
}

RunConfig config_for(const Run& run, const VerifyOptions& opts) {
  RunConfig c;
  c.eq = run.eq;
  c.params = run.params;
  c.xmax = run.xmax;
  if (opts.rtol) c.rtol = *opts.rtol;
  return c;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Unit-Wronskian principal amplitude from closed forms, independent of the pipeline.
double known_principal_v(const Run& run, double x) {
  if (run.eq == "constant") return 1.0 / std::sqrt(run.params.at("c"));
  if (run.eq == "gen-airy") {
    const double nu = run.params.at("nu");
    const double t = std::pow(x, 1.0 / (2.0 * nu));
    const double j = std::cyl_bessel_j(nu, t), y = std::cyl_neumann(nu, t);
    return nu * kPi * x * (j * j + y * y);
  }
  if (run.eq == "inverse-x") {
    const double t = 2.0 * std::sqrt(x);
    const double j = std::cyl_bessel_j(1.0, t), y = std::cyl_neumann(1.0, t);
    return kPi * x * (j * j + y * y);
  }
  const double g = run.params.at("gamma");
  return x / std::sqrt(g * g - 0.25);
}

PairMatrix random_unimodular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (std::abs(a) < 0.3) continue;
    return {a, b, c, (1.0 + b * c) / a};
  }
}

PairTrajectory principal_pair(const PairTrajectory& t) {
  return transform_pair(t, find_principal(t, tail_window(t, 0.25)).matrix);
}

template <class F>
Check guarded(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    Check c;
    c.name = name;
    c.measured = std::nan("");
    c.bound = "no error";
    c.detail = std::string("error: ") + e.what();
    return c;
  }
}

Check scramble_recovery(const VerifyOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const int scrambles = opts.full ? 10 : 3;
  std::mt19937_64 rng(opts.seed);
  double worst_v = 0.0, worst_k = 0.0;
  std::ostringstream detail;
  for (const Run& run : catalog_runs()) {
    const PairTrajectory t = default_unit_pair(config_for(run, opts));
    double run_v = 0.0, run_k = 0.0;
    for (int k = 0; k < scrambles; ++k) {
      const PairTrajectory s = transform_pair(t, random_unimodular(rng));
      const Interval w = tail_window(s, 0.25);
      const PrincipalReport r = find_principal(s, w);
      for (double x : linspace(w.a, w.b, 200)) {
        const PairState st = s.sample(x);
        const double vbar = r.coeffs.A * st.y1 * st.y1 + r.coeffs.B * st.y2 * st.y2 + 2.0 * r.coeffs.C * st.y1 * st.y2;
        const double ref = known_principal_v(run, x);
        run_v = std::max(run_v, std::abs(vbar - ref) / ref);
      }
      run_k = std::max({run_k, std::abs(r.k1_est), std::abs(r.k2_est)});
    }
    detail << run.eq << ": v " << sci(run_v) << ", k " << sci(run_k) << "; ";
    worst_v = std::max(worst_v, run_v);
    worst_k = std::max(worst_k, run_k);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  detail << scrambles << " scrambles per equation in " << sci(secs) << " s";
  Check c;
  c.name = "scramble recovery";
  c.measured = worst_v;
  c.bound = "v rel <= 1e-5, |k1|,|k2| <= 1e-5, <= 60 s";
  c.pass = worst_v <= 1e-5 && worst_k <= 1e-5 && secs <= 60.0;
  c.detail = detail.str();
  return c;
}

Check airy_amplitude(const VerifyOptions& opts) {
  const double nu = 1.0 / 3.0;
  const Run run{"gen-airy", {{"nu", nu}}, 200.0};
  const PairTrajectory p = principal_pair(default_unit_pair(config_for(run, opts)));
  // Bessel-pair normalization: the pair's Wronskian is 1/(nu pi).
  auto v_bessel = [&](const PairTrajectory& t, double x) {
    const PairState s = t.sample(x);
    return (s.y1 * s.y1 + s.y2 * s.y2) / (nu * kPi);
  };
  const double scaled = v_bessel(p, 100.0) * std::sqrt(100.0);
  double agree = 0.0, closed = 0.0;
  for (double x : {10.0, 50.0, 100.0}) {
    agree = std::max(agree, std::abs(example1_v(nu, x) - v_bessel(p, x)) / example1_v(nu, x));
    const double t = std::pow(x, 1.5);
    const double ref = x * modulus(nu, t) / t;
    closed = std::max(closed, std::abs(v_bessel(p, x) - ref) / ref);
  }

  // The stated pair solves y'' + x^(1/nu - 2) y = 0; same checks there.
  RunConfig alt;
  alt.eq = "x^(1/nu - 2)";
  alt.params = {{"nu", nu}};
  alt.x0 = 1.0;
  alt.xmax = 200.0;
  if (opts.rtol) alt.rtol = *opts.rtol;
  const PairTrajectory q = principal_pair(default_unit_pair(alt));
  const double alt_scaled = v_bessel(q, 100.0) * std::sqrt(100.0);
  double alt_agree = 0.0;
  for (double x : {10.0, 50.0, 100.0}) {
    alt_agree = std::max(alt_agree, std::abs(example1_v(nu, x) - v_bessel(q, x)) / example1_v(nu, x));
  }

  Check c;
  c.name = "generalized Airy amplitude";
  c.measured = scaled;
  c.bound = "v sqrt(x) at 100 in 3/pi +- 1%, example1_v agreement <= 1e-4";
  c.pass = std::abs(scaled - 3.0 / kPi) <= 0.01 * 3.0 / kPi && agree <= 1e-4;
  c.known_failure = true;
  c.detail = "catalog q = (2 nu)^-2 x^(1/nu-2): v sqrt(x) = " + sci(scaled) + " (2/pi = " + sci(2.0 / kPi) +
             "), example1_v mismatch " + sci(agree) + ", mismatch against x(J^2+Y^2)(x^(1/(2nu))) " + sci(closed) +
             "; q = x^(1/nu-2): v sqrt(x) = " + sci(alt_scaled) + ", example1_v mismatch " + sci(alt_agree);
  return c;
}

Check inverse_x(const VerifyOptions& opts) {
  const Run run{"inverse-x", {}, 400.0};
  const AnalysisReport r = analyze(config_for(run, opts));
  const Classification& cl = r.principal.classification;
  const PairTrajectory p = transform_pair(default_unit_pair(config_for(run, opts)), r.principal.matrix);
  const PairState s = p.sample(400.0);
  // Bessel-pair normalization of x^(1/2) Z_1(2 x^(1/2)): Wronskian 1/pi.
  const double ratio = (s.y1 * s.y1 + s.y2 * s.y2) / kPi / std::sqrt(400.0);
  const double K = cl.K.value_or(std::nan(""));
  Check c;
  c.name = "inverse-x growth";
  c.measured = K;
  c.bound = "L-infinite, |K| <= 1e-3, v/sqrt(x) at 400 in 1/pi +- 1%";
  c.pass = cl.tag == LimitClass::l_infinite && std::abs(K) <= 1e-3 && std::abs(ratio - 1.0 / kPi) <= 0.01 / kPi;
  c.detail = "tag " + to_string(cl.tag) + ", v/sqrt(x) = " + sci(ratio) + " (1/pi = " + sci(1.0 / kPi) + "); " +
             r.principal.diagnostics + cl.diagnostics;
  return c;
}

Check cauchy_euler_slope(const VerifyOptions& opts) {
  const AnalysisReport r = analyze(config_for({"cauchy-euler", {{"gamma", 1.0}}, 500.0}, opts));
  const Classification& cl = r.principal.classification;
  const double K = cl.K.value_or(std::nan(""));
  const bool note = to_json(r).find("v = x/s") != std::string::npos;
  Check c;
  c.name = "Cauchy-Euler slope";
  c.measured = K;
  c.bound = "L-infinite, K in 2/sqrt(3) +- 1e-3, normalization note present";
  c.pass = cl.tag == LimitClass::l_infinite && std::abs(K - 2.0 / std::sqrt(3.0)) <= 1e-3 && note;
  c.detail = "tag " + to_string(cl.tag) + (note ? ", note present; " : ", note missing; ") + r.principal.diagnostics +
             cl.diagnostics;
  return c;
}

Check airy_gaps(const VerifyOptions& opts) {
  const Run run{"gen-airy", {{"nu", 1.0 / 3.0}}, 200.0};
  const ZerosReport z = zero_gaps(config_for(run, opts));
  const auto& rows = z.table.rows;
  bool monotone = rows.size() >= 11;
  for (std::size_t i = rows.size() >= 10 ? rows.size() - 10 : 1; monotone && i < rows.size(); ++i) {
    monotone = rows[i].gap < rows[i - 1].gap;
  }
  const PairTrajectory p = principal_pair(default_unit_pair(config_for(run, opts)));
  const std::vector<double> comp = competitor_tail_gaps(p, z.span);
  const auto best = std::min_element(comp.begin(), comp.end()) - comp.begin();
  Check c;
  c.name = "gap table, principal case";
  c.measured = z.d_last;
  c.bound = ">= 30 rows, monotone tail, d_last <= 1e-4, d_last < d_first/10, best competitor k = 6";
  c.pass = rows.size() >= 30 && monotone && z.d_last <= 1e-4 && z.d_last < z.d_first / 10.0 && best == 6;
  c.detail = std::to_string(rows.size()) + " rows, d_first " + sci(z.d_first) + ", tail " +
             (monotone ? "monotone" : "not monotone") + ", best competitor k = " + std::to_string(best);
  return c;
}

Check cauchy_euler_gaps(const VerifyOptions& opts) {
  const ZerosReport z = zero_gaps(config_for({"cauchy-euler", {{"gamma", 1.0}}, 1e9}, opts));
  Check c;
  c.name = "gap table, Cauchy-Euler offset";
  c.measured = z.delta_last;
  c.bound = "delta_last in pi/6 +- 1e-4";
  c.pass = std::abs(z.delta_last - kPi / 6.0) <= 1e-4;
  c.detail = std::to_string(z.table.rows.size()) + " rows on [1, 1e9], pi/6 = " + sci(kPi / 6.0);
  return c;
}

Check appell(const VerifyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 1);
  double worst = 0.0;
  std::ostringstream detail;
  for (const Run& run : catalog_runs()) {
    const PairTrajectory t = default_unit_pair(config_for(run, opts));
    const double pad = 1e-3 * (t.x_end() - t.x_begin());
    const auto grid = linspace(t.x_begin() + pad, t.x_end() - pad, 200);
    std::vector<CombinationCoefficients> forms = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 0.5}};
    for (int k = 0; k < 5; ++k) forms.push_back(coefficients_of(random_unimodular(rng)));
    double run_worst = 0.0;
    for (const auto& f : forms) run_worst = std::max(run_worst, appell_residual(t, f, grid).max);
    detail << run.eq << " " << sci(run_worst) << "; ";
    worst = std::max(worst, run_worst);
  }
  Check c;
  c.name = "Appell identity";
  c.measured = worst;
  c.bound = "<= 1e-5";
  c.pass = worst <= 1e-5;
  c.detail = detail.str();
  return c;
}

Check phase_identities(const VerifyOptions& opts) {
  double ident = 0.0, recon = 0.0;
  bool monotone = true;
  for (const Run& run : catalog_runs()) {
    const PairTrajectory t = default_unit_pair(config_for(run, opts));
    const PhaseData p = phase_unwrap(t, linspace(t.x_begin(), t.x_end(), 2001));
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      const PairState s = t.sample(p.grid[i]);
      // alpha' from differentiating atan2(y1, y2) with the sampled derivatives.
      const double alpha_prime = (s.dy1 * s.y2 - s.y1 * s.dy2) / p.v[i];
      ident = std::max(ident, std::abs(p.v[i] * alpha_prime + p.w) / std::abs(p.w));
      const double sv = std::sqrt(p.v[i]);
      recon = std::max({recon, std::abs(s.y1 - sv * std::sin(p.alpha[i])) / sv,
                        std::abs(s.y2 - sv * std::cos(p.alpha[i])) / sv});
      if (i > 0 && !(p.alpha[i] > p.alpha[i - 1])) monotone = false;
    }
  }
  Check c;
  c.name = "phase identities";
  c.measured = ident;
  c.bound = "v alpha' = -w to 1e-9, reconstruction <= 1e-7 sqrt(v), alpha monotone";
  c.pass = ident <= 1e-9 && recon <= 1e-7 && monotone;
  c.detail = "reconstruction " + sci(recon) + (monotone ? ", monotone" : ", not monotone");
  return c;
}

Check sufficient(const VerifyOptions& opts) {
  std::ostringstream detail;
  bool ok = true;

  const Run airy{"gen-airy", {{"nu", 1.0 / 3.0}}, 200.0};
  const AnalysisReport a = analyze(config_for(airy, opts));
  const PairTrajectory p = transform_pair(default_unit_pair(config_for(airy, opts)), a.principal.matrix);
  const PhaseData ph = amplitude_series(p, linspace(1.0, 200.0, 2000));
  bool decreasing = true;
  double max_dv = -INFINITY;
  for (std::size_t i = 0; i < ph.v.size(); ++i) {
    if (!(ph.v[i] > 0.0) || (i > 0 && !(ph.v[i] < ph.v[i - 1]))) decreasing = false;
    max_dv = std::max(max_dv, ph.v_prime[i]);
  }
  const auto& ac = a.principal.classification;
  const bool dv_zero = ac.K && std::abs(*ac.K) <= 1e-4;
  const bool airy_ok = a.conditions.corollary1.verdict == Verdict::holds && decreasing && max_dv <= 1e-8 && dv_zero;
  detail << "gen-airy: corollary 1 " << to_string(a.conditions.corollary1.verdict) << ", v "
         << (decreasing ? "decreasing" : "not decreasing") << ", max v' " << sci(max_dv) << ", K "
         << (ac.K ? sci(*ac.K) : "none") << "; ";
  ok = ok && airy_ok;

  const AnalysisReport k = analyze(config_for({"constant", {{"c", 1.0}}, 50.0}, opts));
  const bool const_ok = k.conditions.corollary2.verdict == Verdict::holds &&
                        k.principal.classification.tag == LimitClass::l_finite;
  detail << "constant: corollary 2 " << to_string(k.conditions.corollary2.verdict) << ", "
         << to_string(k.principal.classification.tag) << "; ";
  ok = ok && const_ok;

  const SufficientConditions ce = sufficient_conditions(catalog_get("cauchy-euler", {{"gamma", 1.0}}), {1.0, 500.0});
  const bool ce_ok =
      ce.corollary2.verdict == Verdict::fails && ce.corollary2.failing_points == ce.corollary2.points;
  detail << "cauchy-euler: corollary 2 fails at " << ce.corollary2.failing_points << " of " << ce.corollary2.points;
  ok = ok && ce_ok;

  Check c;
  c.name = "sufficient conditions";
  c.measured = max_dv;
  c.bound = "hypotheses and conclusions as stated per equation";
  c.pass = ok;
  c.detail = detail.str();
  return c;
}

Check bessel_modulus(const VerifyOptions& opts) {
  const double two_pi = 2.0 / kPi;
  bool increasing = true, bounded = true;
  const auto grid = logspace(0.1, 100.0, 200);
  for (double nu : {0.1, 0.25, 1.0 / 3.0, 0.45}) {
    double last = 0.0;
    for (const BesselValue& b : bessel_jy_grid(nu, grid)) {
      const double m = b.t * (b.J * b.J + b.Y * b.Y);
      if (!(m > last)) increasing = false;
      if (!(m < two_pi)) bounded = false;
      last = m;
    }
  }
  double half = 0.0;
  for (double t : grid) half = std::max(half, std::abs(modulus(0.5, t) - two_pi));

  const Run run{"gen-airy", {{"nu", 0.4}}, 200.0};
  const PairTrajectory p = principal_pair(default_unit_pair(config_for(run, opts)));
  const PhaseData ph = amplitude_series(p, linspace(2.0, 200.0, 50));
  bool signs = true;
  for (std::size_t i = 0; i < ph.v.size(); ++i) {
    if (!(ph.v[i] > 0.0 && ph.v_prime[i] < 0.0 && ph.v_second[i] > 0.0)) signs = false;
  }
  Check c;
  c.name = "Bessel modulus";
  c.measured = half;
  c.bound = "M increasing and < 2/pi, |M_1/2 - 2/pi| <= 1e-10, signs of v, v', v'' at nu = 0.4";
  c.pass = increasing && bounded && half <= 1e-10 && signs;
  c.detail = std::string(increasing ? "increasing" : "not increasing") + ", " + (bounded ? "bounded" : "unbounded") +
             ", sign pattern " + (signs ? "holds" : "violated");
  return c;
}

}  // namespace

std::vector<Check> acceptance_checks(const VerifyOptions& opts) {
  std::vector<Check> out;
  out.push_back(guarded("scramble recovery", [&] { return scramble_recovery(opts); }));
  out.push_back(guarded("generalized Airy amplitude", [&] { return airy_amplitude(opts); }));
  out.back().known_failure = true;
  out.push_back(guarded("inverse-x growth", [&] { return inverse_x(opts); }));
  out.push_back(guarded("Cauchy-Euler slope", [&] { return cauchy_euler_slope(opts); }));
  out.push_back(guarded("gap table, principal case", [&] { return airy_gaps(opts); }));
  out.push_back(guarded("gap table, Cauchy-Euler offset", [&] { return cauchy_euler_gaps(opts); }));
  out.push_back(guarded("Appell identity", [&] { return appell(opts); }));
  out.push_back(guarded("phase identities", [&] { return phase_identities(opts); }));
  out.push_back(guarded("sufficient conditions", [&] { return sufficient(opts); }));
  out.push_back(guarded("Bessel modulus", [&] { return bessel_modulus(opts); }));
  return out;
}

}  // namespace oscpair
