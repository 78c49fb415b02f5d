#pragma once

#include <cmath>

#include "oscpair/integrate.hpp"
#include "oscpair/qfunc.hpp"

namespace testing_support {

inline oscpair::PairTrajectory default_pair(const oscpair::EquationModel& m, double xmax,
                                            const oscpair::IntegratorOptions& opt = {}) {
  return oscpair::normalize_unit_wronskian(oscpair::integrate_pair(m, {0.0, 1.0}, {1.0, 0.0}, xmax, opt));
}

// x^(1/2) sin(s log x), x^(1/2) cos(s log x) scaled to unit Wronskian.
inline oscpair::PairTrajectory cauchy_euler_pair(double gamma, double xmax) {
  const auto m = oscpair::catalog_get("cauchy-euler", {{"gamma", gamma}});
  const double s = m.param("s");
  return oscpair::normalize_unit_wronskian(oscpair::integrate_pair(m, {0.0, s}, {1.0, 0.5}, xmax));
}

}  // namespace testing_support
