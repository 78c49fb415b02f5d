#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "oscpair/phasekit.hpp"
#include "oscpair/principal.hpp"

namespace oscpair {

enum class ZeroTarget { y1, y2, dy1, dy2 };

/// Zeros of one component on `span`, sorted. Sign changes of the dense output
/// are bracketed on a sub-sampled mesh, then refined by Newton (at most 8
/// steps) with a bisection fallback. Throws ConfigError if span leaves the
/// trajectory.
std::vector<double> zeros_of(const PairTrajectory& traj, ZeroTarget target, const Interval& span);

/// Zeros of the solution c1 y1 + c2 y2 (or of its derivative) on `span`.
std::vector<double> zeros_of_combination(const PairTrajectory& traj, double c1, double c2, bool derivative,
                                         const Interval& span);

struct ZeroGapRow {
  std::size_t j = 0;
  double x_crit = 0.0;     // zero of y1'
  double x_zero = 0.0;     // nearest zero of y2
  double gap = 0.0;        // |x_crit - x_zero|
  double phase_gap = 0.0;  // |alpha(x_crit) - alpha(x_zero)| mod pi, folded into [0, pi/2]
};

struct ZeroGapTable {
  std::vector<ZeroGapRow> rows;
  int first = 0;  // which solution (0 or 1) supplied the critical points

  /// Header j,x_crit,x_zero,gap,phase_gap; values with 17 significant digits.
  std::string to_csv() const;
};

/// Matches each zero of the `first` solution's derivative to the nearest zero
/// of the other solution (ties go left). Critical points without a zero of
/// the other solution on both sides inside span are dropped. Throws
/// ConfigError when either sequence has fewer than five zeros in span.
ZeroGapTable gap_table(const PairTrajectory& traj, const PhaseData& phase, const Interval& span, int first = 0);

/// Mean gap over the last `tail` critical points of y1 when matched against
/// zeros of the rotated solution cos(theta) y1 + sin(theta) y2, one entry
/// per theta = k pi / count, k = 0 .. count - 1.
std::vector<double> competitor_tail_gaps(const PairTrajectory& traj, const Interval& span, int count = 12,
                                         std::size_t tail = 10);

struct CriticalResidual {
  double max = 0.0;
  std::vector<double> lhs;  // cot alpha(x_j)
  std::vector<double> rhs;  // alpha'' / (2 alpha'^2) = v' / (2 w)
};

/// Compares cot alpha(x_j) with alpha''/(2 alpha'^2) at critical points of y1.
/// Throws NumericError when sin alpha(x_j) is within 1e-12 of zero.
CriticalResidual critical_point_residual(const PairTrajectory& traj, const PhaseData& phase,
                                         const std::vector<double>& x_crit);

}  // namespace oscpair
