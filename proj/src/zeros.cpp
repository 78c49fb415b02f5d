#include "oscpair/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>

#include "oscpair/error.hpp"

namespace oscpair {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSubdivisions = 4;

struct Component {
  double c1, c2;
  bool derivative;

  double value(const PairState& s) const { return derivative ? c1 * s.dy1 + c2 * s.dy2 : c1 * s.y1 + c2 * s.y2; }

  // y'' = -q y supplies the slope of a derivative target.
  double slope(const PairState& s, double q) const {
    return derivative ? -q * (c1 * s.y1 + c2 * s.y2) : c1 * s.dy1 + c2 * s.dy2;
  }
};

double refine(const PairTrajectory& traj, const Component& f, double lo, double hi, double flo) {
  double x = 0.5 * (lo + hi);
  int newton = 0;
  for (int iter = 0; iter < 200; ++iter) {
    const PairState s = traj.sample(x);
    const double fx = f.value(s);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double tol = std::max(1e-14 * std::abs(x), 1e-15);
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    double next = 0.5 * (lo + hi);
    if (newton < 8) {
      const double d = f.slope(s, traj.model().q(x));
      const double cand = d != 0.0 ? x - fx / d : next;
      if (cand > lo && cand < hi) {
        ++newton;
        if (std::abs(cand - x) <= tol) return cand;
        next = cand;
      }
    }
    x = next;
  }
  return x;
}

std::vector<double> scan(const PairTrajectory& traj, const Component& f, const Interval& span) {
  if (!(span.a < span.b) || span.a < traj.x_begin() || span.b > traj.x_end()) {
    throw ConfigError("zero search span must lie inside the trajectory span");
  }
  std::vector<double> pts{span.a};
  const auto mesh = traj.mesh();
  auto it = std::upper_bound(mesh.begin(), mesh.end(), span.a);
  double prev = span.a;
  for (;; ++it) {
    const double node = (it == mesh.end() || *it >= span.b) ? span.b : *it;
    for (int k = 1; k < kSubdivisions; ++k) pts.push_back(prev + (node - prev) * k / kSubdivisions);
    pts.push_back(node);
    if (node == span.b) break;
    prev = node;
  }

  std::vector<double> out;
  double xl = pts[0];
  double fl = f.value(traj.sample(xl));
  if (fl == 0.0) out.push_back(xl);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double xr = pts[i];
    const double fr = f.value(traj.sample(xr));
    if (fr == 0.0) {
      out.push_back(xr);
    } else if (fl != 0.0 && (fl > 0.0) != (fr > 0.0)) {
      out.push_back(refine(traj, f, xl, xr, fl));
    }
    xl = xr;
    fl = fr;
  }
  return out;
}

// Nearest element of a sorted list, ties to the left. Requires a non-empty list.
std::size_t nearest(const std::vector<double>& xs, double x) {
  auto it = std::lower_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return 0;
  if (it == xs.end()) return xs.size() - 1;
  const std::size_t r = static_cast<std::size_t>(it - xs.begin());
  return (x - xs[r - 1] <= xs[r] - x) ? r - 1 : r;
}

double fold_phase(double d) {
  const double r = std::fmod(std::abs(d), kPi);
  return std::min(r, kPi - r);
}

}  // namespace

std::vector<double> zeros_of_combination(const PairTrajectory& traj, double c1, double c2, bool derivative,
                                         const Interval& span) {
  return scan(traj, Component{c1, c2, derivative}, span);
}

std::vector<double> zeros_of(const PairTrajectory& traj, ZeroTarget target, const Interval& span) {
  switch (target) {
    case ZeroTarget::y1: return zeros_of_combination(traj, 1.0, 0.0, false, span);
    case ZeroTarget::y2: return zeros_of_combination(traj, 0.0, 1.0, false, span);
    case ZeroTarget::dy1: return zeros_of_combination(traj, 1.0, 0.0, true, span);
    case ZeroTarget::dy2: return zeros_of_combination(traj, 0.0, 1.0, true, span);
  }
  return {};
}

std::string ZeroGapTable::to_csv() const {
  std::string out = "j,x_crit,x_zero,gap,phase_gap\n";
  char buf[160];
  for (const ZeroGapRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g\n", r.j, r.x_crit, r.x_zero, r.gap, r.phase_gap);
    out += buf;
  }
  return out;
}

ZeroGapTable gap_table(const PairTrajectory& traj, const PhaseData& phase, const Interval& span, int first) {
  if (first != 0 && first != 1) throw ConfigError("first solution index must be 0 or 1");
  const std::vector<double> crit = zeros_of(traj, first == 0 ? ZeroTarget::dy1 : ZeroTarget::dy2, span);
  const std::vector<double> zs = zeros_of(traj, first == 0 ? ZeroTarget::y2 : ZeroTarget::y1, span);
  if (crit.size() < 5 || zs.size() < 5) {
    throw ConfigError("span holds too few zeros for a gap table (" + std::to_string(crit.size()) +
                      " critical points, " + std::to_string(zs.size()) + " zeros)");
  }
  ZeroGapTable t;
  t.first = first;
  for (double xc : crit) {
    if (xc < zs.front() || xc > zs.back()) continue;
    const double xz = zs[nearest(zs, xc)];
    ZeroGapRow row;
    row.j = t.rows.size();
    row.x_crit = xc;
    row.x_zero = xz;
    row.gap = std::abs(xc - xz);
    row.phase_gap = fold_phase(phase_at(traj, phase, xc) - phase_at(traj, phase, xz));
    t.rows.push_back(row);
  }
  return t;
}

std::vector<double> competitor_tail_gaps(const PairTrajectory& traj, const Interval& span, int count,
                                         std::size_t tail) {
  if (count < 1 || tail < 1) throw ConfigError("competitor count and tail must be positive");
  const std::vector<double> crit = zeros_of(traj, ZeroTarget::dy1, span);
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    const double th = k * kPi / count;
    const std::vector<double> zs = zeros_of_combination(traj, std::cos(th), std::sin(th), false, span);
    std::vector<double> gaps;
    for (double xc : crit) {
      if (zs.empty() || xc < zs.front() || xc > zs.back()) continue;
      gaps.push_back(std::abs(xc - zs[nearest(zs, xc)]));
    }
    if (gaps.size() < tail) throw ConfigError("too few matched critical points for the competitor check");
    double sum = 0.0;
    for (std::size_t i = gaps.size() - tail; i < gaps.size(); ++i) sum += gaps[i];
    out.push_back(sum / static_cast<double>(tail));
  }
  return out;
}

CriticalResidual critical_point_residual(const PairTrajectory& traj, const PhaseData& phase,
                                         const std::vector<double>& x_crit) {
  CriticalResidual out;
  for (double x : x_crit) {
    const double a = phase_at(traj, phase, x);
    const double sa = std::sin(a);
    if (std::abs(sa) <= 1e-12) throw NumericError("sin(alpha) vanishes at x = " + std::to_string(x));
    const PairState s = traj.sample(x);
    const double vp = 2.0 * (s.y1 * s.dy1 + s.y2 * s.dy2);
    // alpha' = -w / v, alpha'' = w v' / v^2, so alpha'' / (2 alpha'^2) = v' / (2 w).
    const double lhs = std::cos(a) / sa;
    const double rhs = vp / (2.0 * phase.w);
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    out.max = std::max(out.max, std::abs(lhs - rhs));
  }
  return out;
}

}  // namespace oscpair
