#include "oscpair/phasekit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "oscpair/error.hpp"
#include "quadrature.hpp"

namespace oscpair {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kQuadTol = 1e-10;

void check_grid(const PairTrajectory& traj, std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= traj.x_begin() && grid[i] <= traj.x_end())) {
      throw ConfigError("grid point " + std::to_string(grid[i]) + " outside the trajectory span");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("grid must be strictly increasing");
  }
}

void require_unit(const PairTrajectory& traj) {
  if (!traj.unit_wronskian()) {
    throw ConfigError("pair must have |w| = 1 (got w = " + std::to_string(traj.wronskian()) + ")");
  }
}

double amplitude(const PairState& s) { return s.y1 * s.y1 + s.y2 * s.y2; }

// Distance of a from b on the circle, in [0, pi].
double branch_gap(double a, double b) { return std::abs(std::remainder(a - b, kTwoPi)); }

double snap_to_branch(double approx, double angle) {
  return angle + kTwoPi * std::round((approx - angle) / kTwoPi);
}

}  // namespace

bool CombinationCoefficients::unit_determinant(double tol) const { return std::abs(determinant() - 1.0) <= tol; }

PhaseData amplitude_series(const PairTrajectory& traj, std::span<const double> grid) {
  require_unit(traj);
  check_grid(traj, grid);
  PhaseData out;
  out.w = traj.wronskian();
  out.grid.assign(grid.begin(), grid.end());
  const std::size_t n = grid.size();
  out.v.resize(n);
  out.v_prime.resize(n);
  out.v_second.resize(n);
  out.alpha_prime.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PairState s = traj.sample(grid[i]);
    const double q = traj.model().q(grid[i]);
    const double v = amplitude(s);
    if (!(v > 0.0)) throw NumericError("amplitude vanishes at x = " + std::to_string(grid[i]));
    out.v[i] = v;
    out.v_prime[i] = 2.0 * (s.y1 * s.dy1 + s.y2 * s.dy2);
    out.v_second[i] = 2.0 * (s.dy1 * s.dy1 + s.dy2 * s.dy2) - 2.0 * q * v;
    out.alpha_prime[i] = -out.w / v;
  }
  return out;
}

PhaseData phase_unwrap(const PairTrajectory& traj, std::span<const double> grid) {
  PhaseData out = amplitude_series(traj, grid);
  const double w = out.w;
  auto alpha_prime = [&](double x) { return -w / amplitude(traj.sample(x)); };
  const std::size_t n = grid.size();
  out.alpha.resize(n);
  const PairState s0 = traj.sample(grid[0]);
  out.alpha[0] = std::atan2(s0.y1, s0.y2);
  for (std::size_t i = 1; i < n; ++i) {
    out.alpha[i] =
        out.alpha[i - 1] + detail::integrate_on_mesh(alpha_prime, traj.mesh(), grid[i - 1], grid[i], kQuadTol);
    const PairState s = traj.sample(grid[i]);
    const double gap = branch_gap(out.alpha[i], std::atan2(s.y1, s.y2));
    if (gap > 1e-4) {
      throw NumericError("phase quadrature left the arctangent branch at x = " + std::to_string(grid[i]) +
                         " (mismatch " + std::to_string(gap) + ")");
    }
  }
  return out;
}

double phase_at(const PairTrajectory& traj, const PhaseData& phase, double x) {
  if (phase.alpha.empty()) throw ConfigError("phase data carries no alpha");
  const auto& g = phase.grid;
  auto it = std::lower_bound(g.begin(), g.end(), x);
  std::size_t i = static_cast<std::size_t>(it - g.begin());
  if (i == g.size() || (i > 0 && x - g[i - 1] < g[i] - x)) --i;
  const double w = phase.w;
  auto alpha_prime = [&](double t) { return -w / amplitude(traj.sample(t)); };
  return phase.alpha[i] + detail::integrate_on_mesh(alpha_prime, traj.mesh(), g[i], x, kQuadTol);
}

ResidualStats appell_residual(const PairTrajectory& traj, const CombinationCoefficients& c,
                              std::span<const double> grid) {
  require_unit(traj);
  check_grid(traj, grid);
  auto vbar = [&](double x) {
    const PairState s = traj.sample(x);
    return c.A * s.y1 * s.y1 + c.B * s.y2 * s.y2 + 2.0 * c.C * s.y1 * s.y2;
  };
  // Five-point third difference, Richardson-combined over steps h and 2h.
  auto third = [&](double x, double h) {
    return (-vbar(x - 2.0 * h) + 2.0 * vbar(x - h) - 2.0 * vbar(x + h) + vbar(x + 2.0 * h)) / (2.0 * h * h * h);
  };
  ResidualStats st;
  double sum2 = 0.0;
  for (double x : grid) {
    const QValues qv = traj.model().evaluate(x);
    const double len = std::max(1.0, std::abs(x));
    const double h = 1e-2 * (qv.q != 0.0 ? std::min(1.0 / std::sqrt(std::abs(qv.q)), len) : len);
    if (x - 4.0 * h < traj.x_begin() || x + 4.0 * h > traj.x_end()) continue;
    const double fd = (4.0 * third(x, h) - third(x, 2.0 * h)) / 3.0;
    const PairState s = traj.sample(x);
    const double v = c.A * s.y1 * s.y1 + c.B * s.y2 * s.y2 + 2.0 * c.C * s.y1 * s.y2;
    const double vp = 2.0 * (c.A * s.y1 * s.dy1 + c.B * s.y2 * s.dy2 + c.C * (s.dy1 * s.y2 + s.y1 * s.dy2));
    const double exact = -4.0 * qv.q * vp - 2.0 * qv.dq * v;
    // Envelopes of |vbar| and |vbar'|: |y_i y_j| <= v and |y_i y_j'| <= sqrt(v u).
    const double norm = std::abs(c.A) + std::abs(c.B) + 2.0 * std::abs(c.C);
    const double amp = s.y1 * s.y1 + s.y2 * s.y2, slope = s.dy1 * s.dy1 + s.dy2 * s.dy2;
    const double env0 = norm * amp, env1 = 2.0 * norm * std::sqrt(amp * slope);
    const double scale =
        std::pow(std::abs(qv.q), 1.5) * env0 + 4.0 * std::abs(qv.q) * env1 + 2.0 * std::abs(qv.dq) * env0;
    const double r = scale > 0.0 ? std::abs(fd - exact) / scale : std::abs(fd - exact);
    st.max = std::max(st.max, r);
    sum2 += r * r;
    ++st.count;
  }
  if (st.count < 5) throw ConfigError("grid too coarse for the finite-difference stencil (need 5 usable points)");
  st.rms = std::sqrt(sum2 / static_cast<double>(st.count));
  return st;
}

PruferPolar prufer_polar(const PairTrajectory& traj, int which, std::span<const double> grid) {
  if (which != 0 && which != 1) throw ConfigError("solution index must be 0 or 1");
  check_grid(traj, grid);
  auto pick = [which](const PairState& s) {
    return which == 0 ? std::pair{s.y1, s.dy1} : std::pair{s.y2, s.dy2};
  };
  auto phi_prime = [&](double x) {
    const auto [y, yp] = pick(traj.sample(x));
    return (yp * yp + traj.model().q(x) * y * y) / (y * y + yp * yp);
  };
  PruferPolar out;
  out.grid.assign(grid.begin(), grid.end());
  const std::size_t n = grid.size();
  out.rho.resize(n);
  out.phi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [y, yp] = pick(traj.sample(grid[i]));
    out.rho[i] = std::hypot(y, yp);
    if (!(out.rho[i] > 0.0)) throw ConfigError("solution vanishes identically (y = y' = 0)");
    const double angle = std::atan2(y, yp);
    if (i == 0) {
      out.phi[i] = angle;
    } else {
      const double approx =
          out.phi[i - 1] + detail::integrate_on_mesh(phi_prime, traj.mesh(), grid[i - 1], grid[i], kQuadTol);
      out.phi[i] = snap_to_branch(approx, angle);
    }
  }
  return out;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw ConfigError("linspace needs at least two points");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = b;
  return g;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  if (!(a > 0.0 && b > 0.0)) throw ConfigError("logspace needs positive endpoints");
  if (n < 2) throw ConfigError("logspace needs at least two points");
  std::vector<double> g(n);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  g.front() = a;
  g.back() = b;
  return g;
}

}  // namespace oscpair
