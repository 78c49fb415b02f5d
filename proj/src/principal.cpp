#include "oscpair/principal.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "oscpair/error.hpp"

namespace oscpair {

namespace {

void require_unit(const PairTrajectory& traj) {
  if (!traj.unit_wronskian()) {
    throw ConfigError("pair must have |w| = 1 (got w = " + std::to_string(traj.wronskian()) + ")");
  }
}

void require_window(const PairTrajectory& traj, const Interval& w) {
  if (!(w.a < w.b) || w.a < traj.x_begin() || w.b > traj.x_end()) {
    std::ostringstream os;
    os << "window [" << w.a << ", " << w.b << "] must be a non-empty part of the span [" << traj.x_begin() << ", "
       << traj.x_end() << "]";
    throw ConfigError(os.str());
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Columns whose combination A b1 + B b2 + C b3 is vbar'.
std::array<double, 3> derivative_basis(const PairState& s) {
  return {2.0 * s.y1 * s.dy1, 2.0 * s.y2 * s.dy2, 2.0 * (s.dy1 * s.y2 + s.y1 * s.dy2)};
}

// Covariance of the basis columns over a uniform grid on the window, after
// removing their least-squares polynomial trend of the given degree.
Eigen::Matrix3d basis_covariance(const PairTrajectory& traj, const Interval& window, std::size_t points,
                                 int detrend_degree) {
  const std::vector<double> grid = linspace(window.a, window.b, std::max<std::size_t>(points, 16));
  const Eigen::Index n = static_cast<Eigen::Index>(grid.size());
  const int deg = std::max(detrend_degree, 0);
  Eigen::MatrixXd B(n, 3), P(n, deg + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto c = derivative_basis(traj.sample(grid[i]));
    B.row(i) << c[0], c[1], c[2];
    const double t = (2.0 * grid[i] - window.a - window.b) / window.length();
    double pw = 1.0;
    for (int k = 0; k <= deg; ++k, pw *= t) P(i, k) = pw;
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(P);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, deg + 1);
  const Eigen::MatrixXd R = B - Q * (Q.transpose() * B);
  return R.transpose() * R / static_cast<double>(n - deg - 1);
}

CombinationCoefficients from_chart(double log_p, double m) {
  const double p = std::exp(log_p);
  return {p, (1.0 + m * m) / p, m};
}

double quadratic(const Eigen::Matrix3d& S, const CombinationCoefficients& c) {
  const Eigen::Vector3d v(c.A, c.B, c.C);
  return v.dot(S * v);
}

struct Minimum {
  double objective;
  CombinationCoefficients coeffs;
};

double chart_objective(const gsl_vector* x, void* params) {
  const auto* S = static_cast<const Eigen::Matrix3d*>(params);
  return quadratic(*S, from_chart(gsl_vector_get(x, 0), gsl_vector_get(x, 1)));
}

Minimum simplex_descent(const Eigen::Matrix3d& S, double log_p, double m, double tol) {
  gsl_multimin_function fn{&chart_objective, 2, const_cast<Eigen::Matrix3d*>(&S)};
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(2), &gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(2), &gsl_vector_free);
  gsl_vector_set(x.get(), 0, log_p);
  gsl_vector_set(x.get(), 1, m);
  gsl_vector_set_all(step.get(), 0.25);
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2), &gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());
  for (int iter = 0; iter < 20000; ++iter) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), tol) == GSL_SUCCESS) break;
  }
  const gsl_vector* best = gsl_multimin_fminimizer_x(s.get());
  return {gsl_multimin_fminimizer_minimum(s.get()), from_chart(gsl_vector_get(best, 0), gsl_vector_get(best, 1))};
}

// Aitken extrapolation of three terms; nullopt when they do not converge
// geometrically (non-monotone or non-contracting differences). Differences
// below the relative noise floor count as converged.
std::optional<double> aitken(double s1, double s2, double s3, double noise = 1e-6) {
  const double d1 = s2 - s1, d2 = s3 - s2;
  const double size = std::max({std::abs(s1), std::abs(s2), std::abs(s3)});
  if (std::abs(d1) <= noise * size && std::abs(d2) <= noise * size) return s3;
  if (d1 == 0.0 || (d1 > 0.0) != (d2 > 0.0)) return std::nullopt;
  if (std::abs(d2) >= std::abs(d1)) return std::nullopt;
  return s3 - d2 * d2 / (d2 - d1);
}

double q_slope(const EquationModel& model, double a, double b) {
  const double qa = model.q(a), qb = model.q(b);
  if (!(qa > 0.0 && qb > 0.0) || !(a > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(qb / qa) / std::log(b / a);
}

}  // namespace

PairTrajectory transform_pair(const PairTrajectory& traj, const PairMatrix& m) {
  const double det = m.determinant();
  const double size = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
  if (!(std::abs(det) > 1e-14 * size * size) || !std::isfinite(det)) {
    throw ConfigError("singular pair transformation (ad - bc = " + std::to_string(det) + ")");
  }
  return traj.combine(m.a, m.b, m.c, m.d);
}

CombinationCoefficients coefficients_of(const PairMatrix& m) {
  return {m.a * m.a + m.c * m.c, m.b * m.b + m.d * m.d, m.a * m.b + m.c * m.d};
}

CombinationCoefficients pull_back(const CombinationCoefficients& c, const PairMatrix& m) {
  Eigen::Matrix2d P, M;
  P << c.A, c.C, c.C, c.B;
  M << m.a, m.b, m.c, m.d;
  const Eigen::Matrix2d R = M.transpose() * P * M;
  return {R(0, 0), R(1, 1), R(0, 1)};
}

PairMatrix matrix_for(const CombinationCoefficients& c) {
  if (!(c.A > 0.0)) throw ConfigError("quadratic form needs A > 0");
  if (!c.unit_determinant(1e-8)) throw ConfigError("quadratic form needs AB - C^2 = 1");
  const double r = std::sqrt(c.A);
  return {r, c.C / r, 0.0, 1.0 / r};
}

Decomposition decompose_oscillation(const PairTrajectory& traj, const PhaseData& phase,
                                    const CombinationCoefficients& coeffs, const Interval& window, TrendBasis basis,
                                    double min_phase_advance) {
  if (phase.alpha.size() != phase.grid.size()) throw ConfigError("phase data carries no alpha");
  require_window(traj, window);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < phase.grid.size(); ++i) {
    if (window.contains(phase.grid[i])) idx.push_back(i);
  }
  if (idx.size() < 16) throw ConfigError("window holds fewer than 16 phase grid points");
  Decomposition out;
  out.points = idx.size();
  out.phase_advance = std::abs(phase.alpha[idx.back()] - phase.alpha[idx.front()]);
  if (out.phase_advance < min_phase_advance) {
    throw ConfigError("window carries " + fmt(out.phase_advance) + " rad of phase, fewer than the required " +
                      fmt(min_phase_advance));
  }

  const std::size_t n = idx.size();
  Eigen::VectorXd rhs(n), vp(n), s2(n), c2(n), xt(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = idx[k];
    const PairState s = traj.sample(phase.grid[i]);
    const auto cols = derivative_basis(s);
    rhs[k] = coeffs.A * cols[0] + coeffs.B * cols[1] + coeffs.C * cols[2];
    vp[k] = phase.v_prime[i];
    s2[k] = std::sin(2.0 * phase.alpha[i]);
    c2[k] = std::cos(2.0 * phase.alpha[i]);
    xt[k] = (2.0 * phase.grid[i] - window.a - window.b) / window.length();
  }
  const double vp_rms = vp.norm() / std::sqrt(static_cast<double>(n));
  const bool use_vp = basis == TrendBasis::derivative && vp_rms > 1e-7;
  const int trend_cols = basis == TrendBasis::polynomial ? 3 : (use_vp ? 1 : 0);
  Eigen::MatrixXd X(n, trend_cols + 2);
  if (basis == TrendBasis::polynomial) {
    X.col(0).setOnes();
    X.col(1) = xt;
    X.col(2) = xt.array().square().matrix();
  } else if (use_vp) {
    X.col(0) = vp;
  }
  X.col(trend_cols) = s2;
  X.col(trend_cols + 1) = c2;

  // Column scaling keeps the condition number about the basis, not units.
  Eigen::VectorXd scale = X.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j) {
    if (scale[j] == 0.0) throw NumericError("degenerate least-squares column");
  }
  const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  out.condition = sv[0] / sv[sv.size() - 1];
  if (!(out.condition <= 1e8)) {
    throw NumericError("ill-conditioned oscillation fit (condition " + fmt(out.condition) + ")");
  }
  const Eigen::VectorXd beta = scale.cwiseInverse().asDiagonal() * svd.solve(rhs);
  if (use_vp) out.mean_coeff = beta[0];

  // sin: -w K1 + m K2 / 2, cos: -w K2 - m K1 / 2.
  const double m = vp.mean();
  const double w = phase.w;
  const double cs = beta[trend_cols], cc = beta[trend_cols + 1];
  const double det = w * w + 0.25 * m * m;
  out.k1 = (-w * cs - 0.5 * m * cc) / det;
  out.k2 = (0.5 * m * cs - w * cc) / det;
  return out;
}

std::string to_string(LimitClass c) {
  switch (c) {
    case LimitClass::l_finite: return "L-finite";
    case LimitClass::l_zero: return "L-zero";
    case LimitClass::l_infinite: return "L-infinite";
    case LimitClass::undetermined: return "undetermined";
  }
  return "undetermined";
}

Classification classify(const PhaseData& phase, const Interval& window, double tol) {
  const auto& g = phase.grid;
  if (g.size() < 16 || phase.v.size() != g.size() || phase.v_prime.size() != g.size()) {
    throw ConfigError("classify needs amplitude data on at least 16 grid points");
  }
  Classification out;
  const double lo = g.front(), hi = g.back();
  if (hi > 0.0 && hi / 8.0 >= lo) {
    out.windows = {Interval{hi / 8.0, hi / 4.0}, Interval{hi / 4.0, hi / 2.0}, Interval{hi / 2.0, hi}};
  } else {
    const double len = (hi - lo) / 3.0;
    out.windows = {Interval{lo, lo + len}, Interval{lo + len, lo + 2.0 * len}, Interval{lo + 2.0 * len, hi}};
  }

  for (int k = 0; k < 3; ++k) {
    const Interval& w = out.windows[k];
    double area = 0.0;
    std::size_t first = g.size(), last = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!w.contains(g[i])) continue;
      if (first == g.size()) first = i;
      if (last > 0 && i == last + 1 && g[last] >= w.a) area += 0.5 * (g[i] - g[last]) * (phase.v[i] + phase.v[last]);
      last = i;
    }
    if (first == g.size() || last <= first + 1) throw ConfigError("classification window holds too few grid points");
    const double span = g[last] - g[first];
    out.v_means[k] = area / span;
    out.dv_means[k] = (phase.v[last] - phase.v[first]) / span;
  }
  const auto& m = out.v_means;
  const auto& d = out.dv_means;
  out.growth = (m[1] > 0.0 && m[2] > 0.0) ? std::log2(m[2] / m[1]) : std::numeric_limits<double>::quiet_NaN();

  // Ripple: rms of v about a quadratic trend over the given window.
  {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (window.contains(g[i])) idx.push_back(i);
    }
    if (idx.size() >= 8) {
      Eigen::MatrixXd X(idx.size(), 3);
      Eigen::VectorXd y(idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const double t = (2.0 * g[idx[k]] - window.a - window.b) / window.length();
        X(k, 0) = 1.0;
        X(k, 1) = t;
        X(k, 2) = t * t;
        y[k] = phase.v[idx[k]];
      }
      const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
      const double rms = (X * beta - y).norm() / std::sqrt(static_cast<double>(idx.size()));
      out.ripple = rms / std::abs(y.mean());
    }
  }

  std::ostringstream diag;
  diag << "v means " << fmt(m[0]) << ", " << fmt(m[1]) << ", " << fmt(m[2]) << "; v' means " << fmt(d[0]) << ", "
       << fmt(d[1]) << ", " << fmt(d[2]) << "; growth " << fmt(out.growth) << "; ripple " << fmt(out.ripple);

  const std::optional<double> L_hat = aitken(m[0], m[1], m[2]);
  std::optional<double> K_hat = aitken(d[0], d[1], d[2]);
  const double d_size = std::max({std::abs(d[0]), std::abs(d[1]), std::abs(d[2])});
  // Extrapolation error is a fraction of the v' scale; small negative limits are zero.
  if (K_hat && *K_hat < 0.0 && std::abs(*K_hat) <= 1e-2 * d_size) K_hat = 0.0;

  auto finish = [&](LimitClass tag, std::optional<double> L, std::optional<double> K, const std::string& why) {
    out.tag = tag;
    out.L = L;
    out.K = K;
    out.diagnostics = why + " (" + diag.str() + ")";
    return out;
  };

  if (out.ripple > 1e-2) return finish(LimitClass::undetermined, {}, {}, "v oscillates at the window scale");
  if (!(m[0] > 0.0 && m[1] > 0.0 && m[2] > 0.0)) return finish(LimitClass::undetermined, {}, {}, "non-positive v");

  const bool settled = std::abs(m[2] - m[1]) <= tol * m[2];
  const bool decreasing = m[0] > m[1] && m[1] > m[2];
  const bool increasing = m[0] < m[1] && m[1] < m[2];
  if (settled && m[2] > tol) {
    return finish(LimitClass::l_finite, m[2], K_hat, "v settles to a finite limit");
  }
  if (decreasing && L_hat) {
    if (*L_hat <= tol * m[0]) {
      return finish(LimitClass::l_zero, 0.0, K_hat ? K_hat : std::optional<double>(d[2]), "v decays to zero");
    }
    return finish(LimitClass::l_finite, *L_hat, K_hat, "v decreases to a positive limit");
  }
  if (increasing) {
    if (L_hat) return finish(LimitClass::l_finite, *L_hat, K_hat, "v increases to a finite limit");
    if (K_hat && *K_hat >= 0.0 && std::isfinite(*K_hat)) {
      return finish(LimitClass::l_infinite, {}, K_hat, "v grows without bound while v' converges");
    }
    return finish(LimitClass::undetermined, {}, {}, "v grows but v' does not settle");
  }
  return finish(LimitClass::undetermined, {}, {}, "no consistent trend in the window means");
}

Interval tail_window(const PairTrajectory& traj, double fraction, double min_phase_advance) {
  require_unit(traj);
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("window fraction must lie in (0, 1]");
  const double b = traj.x_end(), x0 = traj.x_begin();
  const double a = b - fraction * (b - x0);
  const std::vector<double> ends{a, b};
  const PhaseData tail = phase_unwrap(traj, ends);
  if (std::abs(tail.alpha[1] - tail.alpha[0]) >= min_phase_advance) return {a, b};
  const PhaseData whole = phase_unwrap(traj, linspace(x0, b, 4001));
  const double end_alpha = whole.alpha.back();
  for (std::size_t i = whole.grid.size(); i-- > 0;) {
    if (whole.grid[i] <= a && std::abs(end_alpha - whole.alpha[i]) >= min_phase_advance) return {whole.grid[i], b};
  }
  return {x0, b};
}

double oscillation_objective(const PairTrajectory& traj, const Interval& window, const CombinationCoefficients& c,
                             std::size_t points, int detrend_degree) {
  require_window(traj, window);
  return quadratic(basis_covariance(traj, window, points, detrend_degree), c);
}

PrincipalReport find_principal(const PairTrajectory& traj, const Interval& window, const FinderOptions& opts) {
  require_unit(traj);
  require_window(traj, window);
  const Eigen::Matrix3d S = basis_covariance(traj, window, opts.window_points, opts.detrend_degree);

  std::vector<std::pair<double, double>> starts;
  for (int k = -6; k <= 6; ++k) {
    for (int j = -8; j <= 8; ++j) starts.emplace_back(k * std::log(2.0), 0.5 * j);
  }
  double jmin = std::numeric_limits<double>::infinity(), jmax = 0.0;
  for (const auto& [lp, m] : starts) {
    const double j = quadratic(S, from_chart(lp, m));
    jmin = std::min(jmin, j);
    jmax = std::max(jmax, j);
  }
  if (!(jmax > 0.0) || jmax - jmin <= 1e-14 * jmax) {
    throw NumericError("oscillation objective is flat across all starts (non-oscillatory window?)");
  }

  std::vector<Minimum> minima;
  minima.reserve(starts.size());
  for (const auto& [lp, m] : starts) minima.push_back(simplex_descent(S, lp, m, opts.rel_tol));
  double best = std::numeric_limits<double>::infinity();
  for (const Minimum& mm : minima) best = std::min(best, mm.objective);
  const Minimum* pick = nullptr;
  for (const Minimum& mm : minima) {
    if (mm.objective > best + 1e-12) continue;
    if (!pick) {
      pick = &mm;
      continue;
    }
    const double dc = std::abs(mm.coeffs.C) - std::abs(pick->coeffs.C);
    const double dab = std::abs(mm.coeffs.A - mm.coeffs.B) - std::abs(pick->coeffs.A - pick->coeffs.B);
    if (dc < 0.0 || (dc == 0.0 && dab < 0.0)) pick = &mm;
  }

  PrincipalReport rep;
  rep.coeffs = pick->coeffs;
  rep.objective = pick->objective;
  rep.window = window;
  rep.starts = starts.size();
  rep.matrix = matrix_for(rep.coeffs);

  const PairTrajectory principal = transform_pair(traj, rep.matrix);
  const std::size_t wn = std::max<std::size_t>(opts.window_points / 4, 64);
  const PhaseData wphase = phase_unwrap(principal, linspace(window.a, window.b, wn));
  rep.window_phase = std::abs(wphase.alpha.back() - wphase.alpha.front());
  std::ostringstream diag;
  double min_phase = opts.min_phase_advance;
  if (rep.window_phase < min_phase) {
    diag << "window carries only " << fmt(rep.window_phase) << " rad of phase; ";
    min_phase = 0.0;
  }
  const Decomposition dec =
      decompose_oscillation(principal, wphase, {1.0, 1.0, 0.0}, window, TrendBasis::polynomial, min_phase);
  rep.k1_est = dec.k1;
  rep.k2_est = dec.k2;

  const PhaseData span = amplitude_series(principal, linspace(traj.x_begin(), traj.x_end(), opts.span_points));
  rep.classification = classify(span, window, opts.classify_tol);
  const double res2 = rep.k1_est * rep.k1_est + rep.k2_est * rep.k2_est;
  if (res2 > opts.residual_tol) {
    diag << "oscillation residual k1^2 + k2^2 = " << fmt(res2) << " above " << fmt(opts.residual_tol) << "; ";
    rep.classification.tag = LimitClass::undetermined;
    rep.classification.L.reset();
    rep.classification.K.reset();
  }
  rep.diagnostics = diag.str();
  return rep;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::not_decidable: return "not-decidable";
  }
  return "not-decidable";
}

SufficientConditions sufficient_conditions(const EquationModel& model, const Interval& span, std::size_t grid_n) {
  if (grid_n < 16) throw ConfigError("grid_n must be at least 16");
  if (!(span.a < span.b)) throw ConfigError("empty span");
  const std::vector<double> grid = span.a > 0.0 ? logspace(span.a, span.b, grid_n) : linspace(span.a, span.b, grid_n);

  SufficientConditions out;
  Predicate c1, c2;
  c1.points = c2.points = grid.size();
  for (double x : grid) {
    const QValues v = model.evaluate(x);
    const double scale = std::abs(v.q) + std::abs(v.dq * x) + std::abs(v.d2q * x * x);
    const double slack = 1e-12 * scale;
    if (v.dq < -slack || v.d2q * x > slack) {
      if (!c1.fails_at) c1.fails_at = x;
      ++c1.failing_points;
    }
    const double ineq = v.q * v.d2q - 3.0 * v.dq * v.dq;
    const double islack = 1e-12 * (std::abs(v.q * v.d2q) + 3.0 * v.dq * v.dq);
    if (v.dq * x > slack || ineq < -islack) {
      if (!c2.fails_at) c2.fails_at = x;
      ++c2.failing_points;
    }
  }

  // Limit behaviour of q from the last dyadic window (or the last quarter).
  const double b = span.b;
  const double a = (b > 0.0 && b / 2.0 >= span.a && b / 2.0 > 0.0) ? b / 2.0 : span.b - 0.25 * (span.b - span.a);
  out.q_growth = q_slope(model, a, b);
  out.q_last = model.q(b);
  const bool slope_known = std::isfinite(out.q_growth);
  const bool grows = slope_known && out.q_growth > 0.05;
  const bool flat = slope_known && std::abs(out.q_growth) < 0.01;

  if (c1.failing_points > 0) {
    c1.verdict = Verdict::fails;
    c1.note = "q' >= 0 and q'' <= 0 violated at " + std::to_string(c1.failing_points) + " grid points";
  } else if (grows) {
    c1.verdict = Verdict::holds;
    c1.note = "q' >= 0, q'' <= 0 on the grid; q grows like x^" + fmt(out.q_growth);
  } else if (slope_known && out.q_growth < 0.01) {
    c1.verdict = Verdict::fails;
    c1.note = "q does not tend to infinity (log-log slope " + fmt(out.q_growth) + ")";
  } else {
    c1.verdict = Verdict::not_decidable;
    c1.note = "sign conditions hold but the growth of q is inconclusive";
  }

  if (c2.failing_points > 0) {
    c2.verdict = Verdict::fails;
    c2.note = "q' <= 0 and q q'' - 3 q'^2 >= 0 violated at " + std::to_string(c2.failing_points) + " of " +
              std::to_string(c2.points) + " grid points";
  } else {
    c2.verdict = Verdict::holds;
    c2.note = "q' <= 0 and q q'' - 3 q'^2 >= 0 on the grid";
  }

  Predicate r;
  r.points = grid.size();
  if (!(out.q_last > 0.0)) {
    r.verdict = Verdict::fails;
    r.note = "q is not positive at the right end";
  } else if (flat) {
    r.verdict = Verdict::holds;
    r.note = "q settles near " + fmt(out.q_last);
  } else if (slope_known && std::abs(out.q_growth) > 0.05) {
    r.verdict = Verdict::fails;
    r.note = out.q_growth > 0.0 ? "q grows without bound" : "q decays to zero";
  } else {
    r.verdict = Verdict::not_decidable;
    r.note = "slow drift of q (log-log slope " + fmt(out.q_growth) + ")";
  }
  out.corollary1 = c1;
  out.corollary2 = c2;
  out.remark_finite_q = r;
  return out;
}

}  // namespace oscpair
