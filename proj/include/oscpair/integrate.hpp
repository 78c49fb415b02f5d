#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "oscpair/qfunc.hpp"

namespace oscpair {

/// (y1, y1', y2, y2') at one abscissa.
struct PairState {
  double y1 = 0.0;
  double dy1 = 0.0;
  double y2 = 0.0;
  double dy2 = 0.0;
};

/// Initial data (y, y') at the model's x0.
struct InitialCondition {
  double y = 0.0;
  double dy = 0.0;
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 10'000'000;
  // Restore the (exactly conserved) Wronskian after every accepted step.
  bool project_wronskian = true;
  // Scale the per-step tolerance by the step's phase advance h*sqrt|q| when
  // that is below 1, so the local error per unit of phase stays bounded and
  // the dense output remains consistent with y'' = -q y.
  bool per_unit_phase = true;
};

/// One solution's dense-output value at x: the interpolant p and its first
/// three derivatives, plus the separately interpolated derivative component.
struct SolutionJet {
  double y = 0.0;    // p(x)
  double dy = 0.0;   // p'(x)
  double d2y = 0.0;  // p''(x)
  double yp = 0.0;   // interpolated y'(x)
  double dyp = 0.0;  // derivative of the interpolated y'
};

/// Dense record of two solutions of y'' + q y = 0 advanced on a shared mesh.
///
/// Between mesh nodes every component (y and y' of both solutions) is a
/// degree-7 Hermite interpolant matching the value and three derivatives at
/// both ends; the derivatives come from the ODE itself (y'' = -q y,
/// y''' = -q' y - q y'), so no numerical differentiation is involved.
class PairTrajectory {
 public:
  PairTrajectory(EquationModel model, std::vector<double> mesh, std::vector<PairState> states,
                 double wronskian, IntegratorOptions options);

  const EquationModel& model() const { return model_; }
  std::span<const double> mesh() const { return mesh_; }
  std::span<const PairState> states() const { return states_; }
  std::size_t size() const { return mesh_.size(); }
  double x_begin() const { return mesh_.front(); }
  double x_end() const { return mesh_.back(); }

  /// Wronskian y1 y2' - y1' y2 recorded at the first node.
  double wronskian() const { return wronskian_; }
  bool unit_wronskian() const;
  const IntegratorOptions& options() const { return options_; }

  /// Interpolated state. At a mesh node returns the stored state exactly.
  /// Throws ConfigError outside [x_begin, x_end].
  PairState sample(double x) const;

  /// Dense-output jets for both solutions (index 0 -> y1, 1 -> y2).
  std::pair<SolutionJet, SolutionJet> sample_jet(double x) const;

  /// Node-wise linear combination (y1, y2) -> (a y1 + b y2, c y1 + d y2).
  /// The recorded Wronskian becomes (ad - bc) w.
  PairTrajectory combine(double a, double b, double c, double d) const;

 private:
  std::size_t interval_of(double x) const;

  EquationModel model_;
  std::vector<double> mesh_;
  std::vector<PairState> states_;
  std::vector<QValues> coeffs_;  // q, q', q'' cached per node
  double wronskian_;
  IntegratorOptions options_;
};

/// Wronskian y1 y2' - y1' y2 of a state.
double wronskian(const PairState& s);

/// Integrates both solutions from model.x0() to xmax with an adaptive
/// Dormand-Prince 5(4) pair on the joint 4-dimensional system.
/// Throws ConfigError on invalid input and NumericError on step underflow or
/// when max_steps is exhausted.
PairTrajectory integrate_pair(const EquationModel& model, InitialCondition ic1, InitialCondition ic2,
                              double xmax, const IntegratorOptions& options = {});

/// Scales both solutions by |w|^(-1/2); the sign of w is kept.
PairTrajectory normalize_unit_wronskian(const PairTrajectory& traj);

}  // namespace oscpair
