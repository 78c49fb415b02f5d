#include "oscpair/integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "oscpair/error.hpp"

namespace oscpair {

double wronskian(const PairState& s) { return s.y1 * s.dy2 - s.dy1 * s.y2; }

namespace {

using Vec4 = std::array<double, 4>;

Vec4 to_vec(const PairState& s) { return {s.y1, s.dy1, s.y2, s.dy2}; }
PairState to_state(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

Vec4 rhs(const EquationModel& model, double x, const Vec4& y) {
  const double q = model.q(x);
  return {y[1], -q * y[0], y[3], -q * y[2]};
}

// Derivatives 0..3 of y and of y' at a node, from the ODE.
struct NodeDerivs {
  std::array<double, 4> y;
  std::array<double, 4> yp;
};

NodeDerivs node_derivs(double y, double yp, const QValues& c) {
  const double ypp = -c.q * y;
  const double y3 = -c.dq * y - c.q * yp;
  const double y4 = -c.d2q * y - 2.0 * c.dq * yp - c.q * ypp;
  return {{y, yp, ypp, y3}, {yp, ypp, y3, y4}};
}

// Degree-7 Hermite interpolant on [0, 1] in the scaled variable t, from the
// scaled derivatives a_k = f^(k)(left) H^k and b_k = f^(k)(right) H^k.
// Returns p, p', p'', p''' with respect to t.
std::array<double, 4> hermite7(const std::array<double, 4>& a, const std::array<double, 4>& b, double t) {
  // p(t) = T(t) + t^4 U(t), T the cubic Taylor polynomial at 0.
  const double T1 = a[0] + a[1] + a[2] / 2.0 + a[3] / 6.0;
  const double dT1 = a[1] + a[2] + a[3] / 2.0;
  const double d2T1 = a[2] + a[3];
  const double d3T1 = a[3];
  const double u0 = b[0] - T1;
  const double u1 = (b[1] - dT1) - 4.0 * u0;
  const double u2 = (b[2] - d2T1) - 12.0 * u0 - 8.0 * u1;
  const double u3 = (b[3] - d3T1) - 24.0 * u0 - 36.0 * u1 - 12.0 * u2;

  const double s = t - 1.0;
  const double U = u0 + s * (u1 + s * (u2 / 2.0 + s * u3 / 6.0));
  const double dU = u1 + s * (u2 + s * u3 / 2.0);
  const double d2U = u2 + s * u3;
  const double d3U = u3;

  const double T = a[0] + t * (a[1] + t * (a[2] / 2.0 + t * a[3] / 6.0));
  const double dT = a[1] + t * (a[2] + t * a[3] / 2.0);
  const double d2T = a[2] + t * a[3];
  const double d3T = a[3];

  const double t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
  return {T + t4 * U, dT + 4.0 * t3 * U + t4 * dU,
          d2T + 12.0 * t2 * U + 8.0 * t3 * dU + t4 * d2U,
          d3T + 24.0 * t * U + 36.0 * t2 * dU + 12.0 * t3 * d2U + t4 * d3U};
}

std::array<double, 4> scaled(const std::array<double, 4>& d, double h) {
  return {d[0], d[1] * h, d[2] * h * h, d[3] * h * h * h};
}

SolutionJet jet_between(double y0, double yp0, const QValues& c0, double y1, double yp1, const QValues& c1,
                        double h, double t) {
  const NodeDerivs l = node_derivs(y0, yp0, c0);
  const NodeDerivs r = node_derivs(y1, yp1, c1);
  const auto py = hermite7(scaled(l.y, h), scaled(r.y, h), t);
  const auto pd = hermite7(scaled(l.yp, h), scaled(r.yp, h), t);
  return {py[0], py[1] / h, py[2] / (h * h), pd[0], pd[1] / h};
}

void project_onto_wronskian(Vec4& y, double w0) {
  // W(y) = y0 y3 - y1 y2 is bilinear; one minimum-norm Newton step.
  const double w = y[0] * y[3] - y[1] * y[2];
  const Vec4 g = {y[3], -y[2], -y[1], y[0]};
  const double g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3];
  if (g2 == 0.0) return;
  const double lambda = (w0 - w) / g2;
  for (int i = 0; i < 4; ++i) y[i] += lambda * g[i];
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

double error_norm(const Vec4& err, const Vec4& y0, const Vec4& y1, const IntegratorOptions& opt,
                  double phase_step) {
  const double rel = opt.per_unit_phase ? opt.rtol * std::min(1.0, phase_step) : opt.rtol;
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double sc = opt.atol + rel * std::max(std::abs(y0[i]), std::abs(y1[i]));
    acc += (err[i] / sc) * (err[i] / sc);
  }
  return std::sqrt(acc / 4.0);
}

double rms_scaled(const Vec4& v, const Vec4& y, const IntegratorOptions& opt) {
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double sc = opt.atol + opt.rtol * std::abs(y[i]);
    acc += (v[i] / sc) * (v[i] / sc);
  }
  return std::sqrt(acc / 4.0);
}

// Starting step from the usual two-evaluation estimate.
double initial_step(const EquationModel& model, double x, const Vec4& y, const Vec4& f,
                    const IntegratorOptions& opt, double span) {
  const double d0 = rms_scaled(y, y, opt);
  const double d1 = rms_scaled(f, y, opt);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, span);
  Vec4 y1;
  for (int i = 0; i < 4; ++i) y1[i] = y[i] + h0 * f[i];
  const Vec4 f1 = rhs(model, x + h0, y1);
  Vec4 df;
  for (int i = 0; i < 4; ++i) df[i] = (f1[i] - f[i]) / h0;
  const double d2 = rms_scaled(df, y, opt);
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, span});
}

}  // namespace

PairTrajectory::PairTrajectory(EquationModel model, std::vector<double> mesh, std::vector<PairState> states,
                               double wronskian, IntegratorOptions options)
    : model_(std::move(model)),
      mesh_(std::move(mesh)),
      states_(std::move(states)),
      wronskian_(wronskian),
      options_(options) {
  if (mesh_.size() < 2 || mesh_.size() != states_.size()) {
    throw ConfigError("trajectory needs at least two nodes with matching states");
  }
  coeffs_.reserve(mesh_.size());
  for (std::size_t i = 0; i < mesh_.size(); ++i) {
    if (i > 0 && !(mesh_[i] > mesh_[i - 1])) throw ConfigError("trajectory mesh must be strictly increasing");
    coeffs_.push_back(model_.evaluate(mesh_[i]));
  }
}

bool PairTrajectory::unit_wronskian() const { return std::abs(std::abs(wronskian_) - 1.0) <= 1e-9; }

std::size_t PairTrajectory::interval_of(double x) const {
  if (!(x >= mesh_.front() && x <= mesh_.back())) {
    throw ConfigError("x = " + std::to_string(x) + " outside trajectory span [" + std::to_string(mesh_.front()) +
                      ", " + std::to_string(mesh_.back()) + "]");
  }
  auto it = std::upper_bound(mesh_.begin(), mesh_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - mesh_.begin());
  return i == 0 ? 0 : std::min(i - 1, mesh_.size() - 2);
}

PairState PairTrajectory::sample(double x) const {
  const std::size_t i = interval_of(x);
  if (x == mesh_[i]) return states_[i];
  if (x == mesh_[i + 1]) return states_[i + 1];
  const auto [j1, j2] = sample_jet(x);
  return {j1.y, j1.yp, j2.y, j2.yp};
}

std::pair<SolutionJet, SolutionJet> PairTrajectory::sample_jet(double x) const {
  const std::size_t i = interval_of(x);
  const double h = mesh_[i + 1] - mesh_[i];
  const double t = (x - mesh_[i]) / h;
  const PairState& l = states_[i];
  const PairState& r = states_[i + 1];
  return {jet_between(l.y1, l.dy1, coeffs_[i], r.y1, r.dy1, coeffs_[i + 1], h, t),
          jet_between(l.y2, l.dy2, coeffs_[i], r.y2, r.dy2, coeffs_[i + 1], h, t)};
}

PairTrajectory PairTrajectory::combine(double a, double b, double c, double d) const {
  std::vector<PairState> out;
  out.reserve(states_.size());
  for (const PairState& s : states_) {
    out.push_back({a * s.y1 + b * s.y2, a * s.dy1 + b * s.dy2, c * s.y1 + d * s.y2, c * s.dy1 + d * s.dy2});
  }
  return {model_, mesh_, std::move(out), (a * d - b * c) * wronskian_, options_};
}

PairTrajectory integrate_pair(const EquationModel& model, InitialCondition ic1, InitialCondition ic2, double xmax,
                              const IntegratorOptions& opt) {
  const double x0 = model.x0();
  if (!(xmax > x0)) throw ConfigError("xmax must exceed x0");
  if (!(opt.rtol >= 1e-13 && opt.rtol <= 1e-3)) throw ConfigError("rtol must lie in [1e-13, 1e-3]");
  if (!(opt.atol > 0.0)) throw ConfigError("atol must be positive");
  const PairState s0{ic1.y, ic1.dy, ic2.y, ic2.dy};
  const double w0 = wronskian(s0);
  const double scale = std::max({std::abs(ic1.y), std::abs(ic1.dy), std::abs(ic2.y), std::abs(ic2.dy)});
  if (!(std::abs(w0) > 1e-14 * scale * scale) || !std::isfinite(w0)) {
    throw ConfigError("initial conditions are linearly dependent (zero Wronskian)");
  }

  std::vector<double> mesh{x0};
  std::vector<PairState> states{s0};
  Vec4 y = to_vec(s0);
  double x = x0;
  Vec4 k1 = rhs(model, x, y);
  double h = initial_step(model, x, y, k1, opt, xmax - x0);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::size_t steps = 0;

  while (x < xmax) {
    if (++steps > opt.max_steps) {
      throw NumericError("step budget exhausted at x = " + std::to_string(x));
    }
    if (h < 16.0 * eps * std::max(1.0, std::abs(x))) {
      throw NumericError("step size underflow at x = " + std::to_string(x) + " (near-singular q?)");
    }
    bool last = false;
    if (x + h >= xmax || x + 1.01 * h >= xmax) {
      h = xmax - x;
      last = true;
    }
    // Step to a representable abscissa so the mesh spacing is the step taken.
    const double xnew = last ? xmax : x + h;
    h = xnew - x;
    Vec4 t, k2, k3, k4, k5, k6, k7, ynew;
    for (int i = 0; i < 4; ++i) t[i] = y[i] + h * a21 * k1[i];
    k2 = rhs(model, x + c2 * h, t);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(model, x + c3 * h, t);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(model, x + c4 * h, t);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(model, x + c5 * h, t);
    for (int i = 0; i < 4; ++i) {
      t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    k6 = rhs(model, xnew, t);
    for (int i = 0; i < 4; ++i) {
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    k7 = rhs(model, xnew, ynew);
    Vec4 err;
    for (int i = 0; i < 4; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    const double phase_step = h * std::sqrt(std::max(std::abs(model.q(x)), std::abs(model.q(xnew))));
    const double en = error_norm(err, y, ynew, opt, phase_step);
    if (!std::isfinite(en)) {
      h *= 0.2;
      continue;
    }
    if (en <= 1.0) {
      if (opt.project_wronskian) {
        project_onto_wronskian(ynew, w0);
        k7 = rhs(model, xnew, ynew);
      }
      x = xnew;
      y = ynew;
      k1 = k7;
      mesh.push_back(x);
      states.push_back(to_state(y));
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      h *= std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
    }
  }
  return {model, std::move(mesh), std::move(states), w0, opt};
}

PairTrajectory normalize_unit_wronskian(const PairTrajectory& traj) {
  const double w = traj.wronskian();
  if (w == 0.0 || !std::isfinite(w)) throw ConfigError("cannot normalize a pair with zero Wronskian");
  const double k = 1.0 / std::sqrt(std::abs(w));
  return traj.combine(k, 0.0, 0.0, k);
}

}  // namespace oscpair
