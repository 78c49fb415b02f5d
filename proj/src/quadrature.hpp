#pragma once

#include <algorithm>
#include <cmath>
#include <span>

namespace oscpair::detail {

template <class F>
double simpson_step(const F& f, double a, double fa, double m, double fm, double b, double fb, double whole,
                    double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson with absolute tolerance tol on [a, b].
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, m, fm, b, fb, whole, tol, 40);
}

// Integral over [a, b] split at the mesh nodes inside it, so each piece sees
// one polynomial segment of the dense output. Tolerance is per unit length.
template <class F>
double integrate_on_mesh(const F& f, std::span<const double> mesh, double a, double b, double tol_per_unit) {
  if (a == b) return 0.0;
  const double sign = b > a ? 1.0 : -1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  double sum = 0.0;
  double x = lo;
  auto it = std::upper_bound(mesh.begin(), mesh.end(), lo);
  while (x < hi) {
    const double next = (it != mesh.end() && *it < hi) ? *it : hi;
    sum += adaptive_simpson(f, x, next, tol_per_unit * (next - x));
    x = next;
    if (it != mesh.end()) ++it;
  }
  return sign * sum;
}

}  // namespace oscpair::detail
