#pragma once

// Generalised Ornstein-Uhlenbeck process in L_2: covariance exp(-tau |t-s|),
// the sigma modulus sigma(h) = sqrt(2) (tau h)^{beta/2}, ball measures,
// Gamma_2, Delta_2 and D_{p,2}, and the resulting x^{-2} tail bound for
// sup_t |X(t) - f(t)|.

#include <utility>

#include "orlicz/bound_engine.hpp"
#include "orlicz/measure_grid.hpp"

namespace orlicz {

struct OUModel {
  double tau = 1.0;
  double T = 1.0;
  double beta1 = 0.5;
  double beta2 = 0.95;
  double alpha_zeta = 2.5;

  double tau_prime() const;
};

/// 2/beta2 < 1/beta1 + 1 with both betas in (0, 1).
bool betas_admissible(double beta1, double beta2);

/// Open interval (2/beta2, 1/beta1 + 1) for alpha_zeta.
std::pair<double, double> alpha_interval(double beta1, double beta2);

/// Throws InvalidParameter for tau, T <= 0, betas outside (0, 1), an empty
/// alpha interval, or (when check_alpha) alpha_zeta outside it.
void validate(const OUModel& m, bool check_alpha = true);

double covariance(const OUModel& m, double t, double s);

/// ||X(t) - X(s)||_2 = (2 - 2 exp(-tau |t-s|))^{1/2}.
double increment_metric(const OUModel& m, double t, double s);

double sigma(const OUModel& m, double beta, double h);
double sigma_inv(const OUModel& m, double beta, double h);
SigmaModulus ou_sigma_modulus(const OUModel& m, double beta);

/// Ball measure around t for the beta2 modulus and zeta(u) = u^alpha_zeta:
/// 2r, min{t, T-t} + r or T, with r = u^{2/(alpha beta2)} / tau'.
double nu_t_closed(const OUModel& m, double t, double u);

/// The same three branches as printed with the small-u value r/2 and the
/// middle value max{t, T-t} + r. Kept for comparison only.
double nu_t_printed(const OUModel& m, double t, double u);

/// 2(T tau + e^{-tau T} - 1)/(tau^2 T^2) + (f_integral / T)^2.
double gamma2_closed(const OUModel& m, double f_integral);

/// delta(y) = c y^kappa; c = 0 means f is constant.
struct PowerModulus {
  double c = 0.0;
  double kappa = 1.0;

  double operator()(double y) const;
};

/// int_0^T int_0^T (2 (tau|u-v|)^{beta1} + delta((2 tau |u-v|)^{beta1/2})^2)^{1-alpha} du dv,
/// reduced to 2 int_0^T (T - h) g(h) dh.
double delta2_quad(const OUModel& m, const PowerModulus& delta_mod, double quad_tol);

/// The printed two-term expression for D_{p,2} at one t in (0, T).
double d_p2_closed(const OUModel& m, double p, double t);

/// D_{p,2} by quadrature of 1/nu_t on a Lebesgue grid of [0, T].
double d_p2_quad(const OUModel& m, double p, int t_grid_points, double quad_tol);

struct Theorem4Options {
  double quad_tol = 1e-6;
  int t_grid_points = 65;
  int alpha_steps = 40;
  bool optimize_alpha = true;  // false: use m.alpha_zeta as given
  SearchSpec p_search;
};

/// The x-free part of the bound: C = (Gamma_2^{1/3} + (D_{p,2}^2 Delta_2)^{1/3})^3
/// at the chosen alpha and p, so that the bound is C / x^2.
struct Theorem4Fit {
  double constant = 0.0;
  double alpha_star = 0.0;
  double p_star = 0.0;
  double gamma2 = 0.0;
  double delta2 = 0.0;
  double d_p2 = 0.0;
};

/// Fit at fixed p; alpha minimised by golden section over its open interval.
Theorem4Fit theorem4_fit(const OUModel& m, double p, double f_integral,
                         const PowerModulus& delta_mod, const Theorem4Options& opts);

/// Fit with p searched as well: grid over opts.p_search, then golden refinement.
Theorem4Fit theorem4_fit_optimized(const OUModel& m, double f_integral,
                                   const PowerModulus& delta_mod, const Theorem4Options& opts);

/// C / x^2 from a fit, raw and clamped.
BoundResult theorem4_apply(const Theorem4Fit& fit, double x);

BoundResult theorem4_bound(const OUModel& m, double x, double p, double f_integral,
                           const PowerModulus& delta_mod, double quad_tol);

}  // namespace orlicz
