#pragma once

#include <span>
#include <string>
#include <vector>

namespace oscpair {

enum class BesselMethod { series, propagated };

std::string to_string(BesselMethod m);

struct BesselValue {
  double nu = 0.0;
  double t = 0.0;
  double J = 0.0;
  double Y = 0.0;
  BesselMethod method = BesselMethod::series;
};

/// J_nu(t) and Y_nu(t) for 0 < nu < 1, t > 0. Ascending series (with the
/// connection formula for Y) when t <= 2; otherwise sqrt(t) J and sqrt(t) Y
/// are integrated along u'' + (1 - (nu^2 - 1/4)/t^2) u = 0 from series data
/// at t = 2 with rtol 1e-12. Throws ConfigError for nu or t out of range.
BesselValue bessel_jy(double nu, double t);

/// bessel_jy on a strictly increasing grid, sharing one integration.
std::vector<BesselValue> bessel_jy_grid(double nu, std::span<const double> ts);

/// The propagated branch seeded from series data at t_seed (0 < t_seed <= t).
BesselValue bessel_jy_propagated(double nu, double t, double t_seed);

/// t (J_nu Y_nu' - J_nu' Y_nu), which equals 2/pi exactly.
double bessel_wronskian(double nu, double t);

/// Modulus t (J_nu^2 + Y_nu^2).
double modulus(double nu, double t);

/// x (J_nu^2 + Y_nu^2) at t = 2 nu x^(1/(2 nu)), for 0 < nu <= 1/2 and x > 0.
double example1_v(double nu, double x);

}  // namespace oscpair
