#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

#include "oscpair/phasekit.hpp"

namespace oscpair {

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
  bool contains(double x) const { return x >= a && x <= b; }
};

/// Row-major 2x2 matrix acting on a pair: (a y1 + b y2, c y1 + d y2).
struct PairMatrix {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
  double determinant() const { return a * d - b * c; }
};

/// New trajectory (a y1 + b y2, c y1 + d y2); the Wronskian scales by ad - bc.
/// Throws ConfigError for a singular matrix.
PairTrajectory transform_pair(const PairTrajectory& traj, const PairMatrix& m);

/// Quadratic-form coefficients of the combination M (applied to y1, y2):
/// A = a^2 + c^2, B = b^2 + d^2, C = ab + cd.
CombinationCoefficients coefficients_of(const PairMatrix& m);

/// Coefficients of the same quadratic form expressed in the original pair,
/// when `coeffs` refers to the transformed pair M (y1, y2): P -> M^T P M.
CombinationCoefficients pull_back(const CombinationCoefficients& coeffs, const PairMatrix& m);

/// A unimodular matrix whose pair has quadratic form (A, B, C):
/// [[sqrt A, C / sqrt A], [0, 1 / sqrt A]]. Requires A > 0 and AB - C^2 = 1.
PairMatrix matrix_for(const CombinationCoefficients& coeffs);

/// How decompose_oscillation models the non-oscillatory part of vbar'.
enum class TrendBasis {
  derivative,  // the pair's own v' (dropped when it is negligibly small)
  polynomial,  // 1, x, x^2 on the window
};

struct Decomposition {
  std::optional<double> mean_coeff;  // coefficient of v' (derivative basis only)
  double k1 = 0.0;
  double k2 = 0.0;
  double phase_advance = 0.0;  // |alpha(b) - alpha(a)| over the window
  double condition = 0.0;      // of the scaled least-squares design
  std::size_t points = 0;
};

/// Least-squares split of vbar' = v' F + G, G = -w (K1 sin 2a + K2 cos 2a),
/// over the phase grid points inside `window`. K1, K2 come from the sin/cos
/// coefficients with v' frozen at its window mean. Throws ConfigError when the
/// window holds fewer than min_phase_advance radians of phase or too few
/// points, NumericError when the design's condition number exceeds 1e8.
Decomposition decompose_oscillation(const PairTrajectory& traj, const PhaseData& phase,
                                    const CombinationCoefficients& coeffs, const Interval& window,
                                    TrendBasis basis = TrendBasis::derivative,
                                    double min_phase_advance = 3.0 * std::numbers::pi);

enum class LimitClass { l_finite, l_zero, l_infinite, undetermined };

std::string to_string(LimitClass c);

struct Classification {
  LimitClass tag = LimitClass::undetermined;
  std::optional<double> L;
  std::optional<double> K;
  std::array<Interval, 3> windows{};
  std::array<double, 3> v_means{};   // window means of v
  std::array<double, 3> dv_means{};  // window means of v' (endpoint differences)
  double growth = 0.0;               // log2 of the last two v means' ratio
  double ripple = 0.0;               // detrended rms of v over `window`, relative
  std::string diagnostics;
};

/// Heuristic limit classification of v and v' for a candidate principal pair.
/// Compares window means over three consecutive windows ending at the last grid
/// point (dyadic [b/8, b/4], [b/4, b/2], [b/2, b] when the span allows, equal
/// thirds otherwise); limits come from Aitken extrapolation of those means.
/// tol is relative.
Classification classify(const PhaseData& phase, const Interval& window, double tol = 1e-3);

struct FinderOptions {
  double rel_tol = 1e-10;         // simplex convergence
  double residual_tol = 1e-8;     // gate on k1^2 + k2^2 for a classification
  double classify_tol = 1e-3;
  std::size_t window_points = 20000;
  int detrend_degree = 2;  // polynomial trend removed from vbar' before the variance; 0 = plain variance
  std::size_t span_points = 8000;
  double min_phase_advance = 3.0 * std::numbers::pi;
};

struct PrincipalReport {
  CombinationCoefficients coeffs;  // relative to the input pair
  PairMatrix matrix;               // a principal pair: matrix applied to the input pair
  Classification classification;
  double k1_est = 0.0;
  double k2_est = 0.0;
  double objective = 0.0;
  Interval window;
  double window_phase = 0.0;  // phase advance over the window
  std::size_t starts = 0;
  std::string diagnostics;
};

/// Tail window: the last `fraction` of the span, extended leftwards until it
/// carries min_phase_advance radians of phase or reaches the left end.
Interval tail_window(const PairTrajectory& traj, double fraction,
                     double min_phase_advance = 3.0 * std::numbers::pi);

/// Minimizes the sample variance of vbar' about its polynomial trend of degree
/// opts.detrend_degree (plain variance for 0) over the window subject to
/// AB - C^2 = 1, A > 0, with a Nelder-Mead multistart in (log p, m).
/// Throws ConfigError for a non-unit pair or bad window and NumericError when
/// the objective is flat across all starts.
PrincipalReport find_principal(const PairTrajectory& traj, const Interval& window, const FinderOptions& opts = {});

/// The finder's objective for given coefficients, exposed for checks.
double oscillation_objective(const PairTrajectory& traj, const Interval& window, const CombinationCoefficients& c,
                             std::size_t points = 20000, int detrend_degree = 2);

enum class Verdict { holds, fails, not_decidable };

std::string to_string(Verdict v);

struct Predicate {
  Verdict verdict = Verdict::not_decidable;
  std::optional<double> fails_at;  // first grid point where an inequality fails
  std::size_t failing_points = 0;
  std::size_t points = 0;
  std::string note;
};

struct SufficientConditions {
  Predicate corollary1;       // q' >= 0, q'' <= 0, q -> infinity
  Predicate corollary2;       // q' <= 0, q q'' - 3 q'^2 >= 0
  Predicate remark_finite_q;  // 0 < q(infinity) < infinity
  double q_growth = 0.0;      // log-log slope of q over the last dyadic window
  double q_last = 0.0;
};

/// Evaluates the hypotheses of the sufficient conditions on a log-spaced grid
/// (linear when the span reaches x <= 0). grid_n >= 16.
SufficientConditions sufficient_conditions(const EquationModel& model, const Interval& span, std::size_t grid_n = 256);

}  // namespace oscpair
