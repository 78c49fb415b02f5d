#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oscpair/integrate.hpp"

namespace oscpair {

/// Coefficients of the quadratic form A y1^2 + B y2^2 + 2C y1 y2. For a pair
/// combination (a y1 + b y2, c y1 + d y2): A = a^2 + c^2, B = b^2 + d^2,
/// C = ab + cd, and AB - C^2 = (ad - bc)^2.
struct CombinationCoefficients {
  double A = 1.0;
  double B = 1.0;
  double C = 0.0;

  double determinant() const { return A * B - C * C; }
  bool unit_determinant(double tol = 1e-9) const;
};

/// Phase and amplitude of a unit-Wronskian pair sampled on a grid.
///
/// y1 = eps sqrt(v) sin(alpha), y2 = eps sqrt(v) cos(alpha), v alpha' = -w.
/// eps is always +1: with alpha' = -w/v the representation holds for either
/// sign of w, so the pair is never reordered.
struct PhaseData {
  std::vector<double> grid;
  std::vector<double> alpha;        // empty when only the amplitude was requested
  std::vector<double> alpha_prime;  // -w / v
  std::vector<double> v;
  std::vector<double> v_prime;
  std::vector<double> v_second;
  double w = -1.0;
  int eps_sign = 1;
};

/// Prufer coordinates of one solution: y = rho sin(phi), y' = rho cos(phi).
struct PruferPolar {
  std::vector<double> grid;
  std::vector<double> rho;
  std::vector<double> phi;
};

struct ResidualStats {
  double max = 0.0;
  double rms = 0.0;
  std::size_t count = 0;
};

/// v = y1^2 + y2^2, v' and v'' = 2(y1'^2 + y2'^2) - 2 q v from sampled states.
/// Requires |w| = 1 and a strictly increasing grid inside the span.
PhaseData amplitude_series(const PairTrajectory& traj, std::span<const double> grid);

/// amplitude_series plus the phase alpha. alpha(grid[0]) is the two-argument
/// arctangent of (y1, y2); later values come from adaptive Simpson quadrature
/// of alpha' = -w/v along the dense output. Throws NumericError if the result
/// drifts from the arctangent branch by more than 1e-4.
PhaseData phase_unwrap(const PairTrajectory& traj, std::span<const double> grid);

/// alpha at an arbitrary x, continued from the nearest grid point of `phase`.
double phase_at(const PairTrajectory& traj, const PhaseData& phase, double x);

/// Compares a finite-difference v''' of vbar = A y1^2 + B y2^2 + 2C y1 y2
/// (five-point stencil, Richardson-combined over h and 2h) with
/// -4 q vbar' - 2 q' vbar. Each difference is divided by
/// |q|^(3/2) V0 + 4|q| V1 + 2|q'| V0, where V0 = N v and V1 = 2N sqrt(v u)
/// bound |vbar| and |vbar'| (N = |A| + |B| + 2|C|, u = y1'^2 + y2'^2).
/// Grid points whose stencil leaves the span are skipped; fewer than five
/// usable points is a ConfigError.
ResidualStats appell_residual(const PairTrajectory& traj, const CombinationCoefficients& coeffs,
                              std::span<const double> grid);

/// Prufer coordinates of solution `which` (0 or 1). phi starts on the
/// arctangent branch at grid[0] and is continued by quadrature of
/// phi' = cos^2 phi + q sin^2 phi, then snapped to the matching branch.
PruferPolar prufer_polar(const PairTrajectory& traj, int which, std::span<const double> grid);

/// n equally spaced points on [a, b], both ends included.
std::vector<double> linspace(double a, double b, std::size_t n);

/// n logarithmically spaced points on [a, b] (a > 0), both ends included.
std::vector<double> logspace(double a, double b, std::size_t n);

}  // namespace oscpair
