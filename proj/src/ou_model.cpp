#include "orlicz/ou_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "orlicz/error.hpp"
#include "orlicz/numerics.hpp"
#include "orlicz/parallel.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

double OUModel::tau_prime() const { return tau * std::pow(2.0, 3.0 / beta2); }

bool betas_admissible(double beta1, double beta2) {
  return beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0 &&
         2.0 / beta2 < 1.0 / beta1 + 1.0;
}

std::pair<double, double> alpha_interval(double beta1, double beta2) {
  return {2.0 / beta2, 1.0 / beta1 + 1.0};
}

void validate(const OUModel& m, bool check_alpha) {
  if (!(m.tau > 0.0) || !std::isfinite(m.tau)) throw InvalidParameter("OU model: tau must be positive");
  if (!(m.T > 0.0) || !std::isfinite(m.T)) throw InvalidParameter("OU model: T must be positive");
  for (double b : {m.beta1, m.beta2}) {
    if (!(b > 0.0 && b < 1.0)) throw InvalidParameter("OU model: beta1 and beta2 must lie in (0, 1)");
  }
  if (!betas_admissible(m.beta1, m.beta2)) {
    throw InvalidParameter("OU model: inadmissible betas, need 2/beta2 < 1/beta1 + 1 (2/beta2 = " +
                           num(2.0 / m.beta2) + ", 1/beta1 + 1 = " + num(1.0 / m.beta1 + 1.0) + ")");
  }
  if (check_alpha) {
    const auto [lo, hi] = alpha_interval(m.beta1, m.beta2);
    if (!(m.alpha_zeta > lo && m.alpha_zeta < hi)) {
      throw InvalidParameter("OU model: alpha_zeta = " + num(m.alpha_zeta) + " outside (" + num(lo) +
                             ", " + num(hi) + ")");
    }
  }
}

double covariance(const OUModel& m, double t, double s) { return std::exp(-m.tau * std::abs(t - s)); }

double increment_metric(const OUModel& m, double t, double s) {
  return std::sqrt(-2.0 * std::expm1(-m.tau * std::abs(t - s)));
}

double sigma(const OUModel& m, double beta, double h) {
  if (h <= 0.0) return 0.0;
  return std::sqrt(2.0) * std::pow(m.tau * h, beta / 2.0);
}

double sigma_inv(const OUModel& m, double beta, double h) {
  if (h <= 0.0) return 0.0;
  return std::pow(h, 2.0 / beta) / (std::pow(2.0, 1.0 / beta) * m.tau);
}

SigmaModulus ou_sigma_modulus(const OUModel& m, double beta) {
  return {[m, beta](double h) { return sigma(m, beta, h); },
          [m, beta](double h) { return sigma_inv(m, beta, h); }};
}

double nu_t_closed(const OUModel& m, double t, double u) {
  if (!(u > 0.0)) return 0.0;
  const double r = std::pow(u, 2.0 / (m.alpha_zeta * m.beta2)) / m.tau_prime();
  const double near = std::min(t, m.T - t);
  const double far = std::max(t, m.T - t);
  if (r >= far) return m.T;
  if (r <= near) return 2.0 * r;
  return near + r;
}

double nu_t_printed(const OUModel& m, double t, double u) {
  if (!(u > 0.0)) return 0.0;
  const double r = std::pow(u, 2.0 / (m.alpha_zeta * m.beta2)) / m.tau_prime();
  const double near = std::min(t, m.T - t);
  const double far = std::max(t, m.T - t);
  if (r > far) return m.T;
  if (r <= near) return r / 2.0;
  return far + r;
}

double gamma2_closed(const OUModel& m, double f_integral) {
  const double a = m.tau * m.T;
  // 2(a + e^{-a} - 1)/a^2, with the series near 0 where cancellation bites.
  double core;
  if (a < 1e-4) {
    core = 1.0 - a / 3.0 + a * a / 12.0;
  } else {
    core = 2.0 * (a + std::expm1(-a)) / (a * a);
  }
  const double mean = f_integral / m.T;
  return core + mean * mean;
}

double PowerModulus::operator()(double y) const {
  if (c == 0.0 || y <= 0.0) return 0.0;
  return c * std::pow(y, kappa);
}

double delta2_quad(const OUModel& m, const PowerModulus& delta_mod, double quad_tol) {
  if (!(quad_tol > 0.0)) throw InvalidParameter("delta2_quad: quad_tol must be positive");
  const double e = 1.0 - m.alpha_zeta;
  auto g = [&](double h) {
    const double dl = delta_mod(std::pow(2.0 * m.tau * h, m.beta1 / 2.0));
    const double base = 2.0 * std::pow(m.tau * h, m.beta1) + dl * dl;
    return 2.0 * (m.T - h) * std::pow(base, e);
  };
  numerics::SingularQuadOptions opts;
  opts.rel_tol = quad_tol;
  try {
    return numerics::integrate_singular_left(g, 0.0, m.T, opts).value;
  } catch (const DivergentIntegral& err) {
    throw DivergentIntegral("Delta_2 is not finite for alpha_zeta = " + num(m.alpha_zeta) +
                            ", beta1 = " + num(m.beta1) + ": " + err.what());
  }
}

double d_p2_closed(const OUModel& m, double p, double t) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("d_p2_closed: p must lie in (0, 1)");
  const double near = std::min(t, m.T - t);
  if (!(near > 0.0)) {
    throw SingularEndpoint("d_p2_closed: t = " + num(t) + " is an endpoint of [0, T]");
  }
  const double far = std::max(t, m.T - t);
  const double a = m.alpha_zeta;
  const double ab = a * m.beta2 / 2.0;
  const double tp = m.tau_prime();
  const double first = 2.0 * tp * std::pow(tp * near, ab - 1.0) / (1.0 - 2.0 / a);
  const double second =
      (p * std::pow(2.0, 1.5 * a) * std::pow(m.tau * far, ab) - std::pow(tp * near, ab)) / m.T;
  return (first + second) / (p * (1.0 - p));
}

double d_p2_quad(const OUModel& m, double p, int t_grid_points, double quad_tol) {
  const auto g = MeasureGrid::lebesgue(0.0, m.T, t_grid_points);
  const auto sm = ou_sigma_modulus(m, m.beta2);
  return d_pq_quad(p, 2.0, g, sm, ZetaSpec{m.alpha_zeta}, quad_tol);
}

namespace {

struct AlphaPoint {
  double alpha;
  double value;  // (D^2 Delta)^{1/3}
  double delta2;
  double d_p2;
};

AlphaPoint evaluate_alpha(const OUModel& base, double alpha, double p, const PowerModulus& dm,
                          const Theorem4Options& opts) {
  OUModel m = base;
  m.alpha_zeta = alpha;
  try {
    const double dl = delta2_quad(m, dm, opts.quad_tol);
    const double d = d_p2_quad(m, p, opts.t_grid_points, opts.quad_tol);
    return {alpha, std::cbrt(d * d * dl), dl, d};
  } catch (const DivergentIntegral&) {
    return {alpha, kInf, kInf, kInf};
  }
}

AlphaPoint best_alpha(const OUModel& m, double p, const PowerModulus& dm,
                      const Theorem4Options& opts) {
  if (!opts.optimize_alpha) {
    validate(m, true);
    return evaluate_alpha(m, m.alpha_zeta, p, dm, opts);
  }
  const auto [lo, hi] = alpha_interval(m.beta1, m.beta2);
  // Both ends of the interval are divergence points; stay a hair inside.
  const double margin = 1e-6 * (hi - lo);
  constexpr double inv_phi = 0.6180339887498948482;
  double a = lo + margin;
  double b = hi - margin;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  AlphaPoint fc = evaluate_alpha(m, c, p, dm, opts);
  AlphaPoint fd = evaluate_alpha(m, d, p, dm, opts);
  for (int it = 0; it < opts.alpha_steps; ++it) {
    if (fc.value <= fd.value) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = evaluate_alpha(m, c, p, dm, opts);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = evaluate_alpha(m, d, p, dm, opts);
    }
  }
  return fc.value <= fd.value ? fc : fd;
}

Theorem4Fit assemble(double gamma2, double p, const AlphaPoint& ap) {
  Theorem4Fit fit;
  fit.gamma2 = gamma2;
  fit.p_star = p;
  fit.alpha_star = ap.alpha;
  fit.delta2 = ap.delta2;
  fit.d_p2 = ap.d_p2;
  const double s = std::cbrt(gamma2) + ap.value;
  fit.constant = s * s * s;
  return fit;
}

}  // namespace

Theorem4Fit theorem4_fit(const OUModel& m, double p, double f_integral,
                         const PowerModulus& delta_mod, const Theorem4Options& opts) {
  validate(m, !opts.optimize_alpha);
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("theorem4: p must lie in (0, 1)");
  const auto ap = best_alpha(m, p, delta_mod, opts);
  if (!std::isfinite(ap.value)) {
    throw DivergentIntegral("Delta_2 or D_{p,2} diverges for every alpha_zeta tried");
  }
  return assemble(gamma2_closed(m, f_integral), p, ap);
}

Theorem4Fit theorem4_fit_optimized(const OUModel& m, double f_integral,
                                   const PowerModulus& delta_mod, const Theorem4Options& opts) {
  validate(m, !opts.optimize_alpha);
  const SearchSpec& s = opts.p_search;
  if (!(s.lo > 0.0 && s.hi < 1.0 && s.lo <= s.hi)) {
    throw InvalidParameter("theorem4: p search range must lie inside (0, 1)");
  }
  const int n = std::max(s.grid, 1);
  std::vector<double> ps(n);
  for (int i = 0; i < n; ++i) ps[i] = n == 1 ? 0.5 * (s.lo + s.hi) : s.lo + (s.hi - s.lo) * i / (n - 1);
  std::vector<AlphaPoint> at(n);
  for (int i = 0; i < n; ++i) at[i] = best_alpha(m, ps[i], delta_mod, opts);
  int arg = 0;
  for (int i = 1; i < n; ++i) {
    if (at[i].value < at[arg].value) arg = i;
  }
  double p_star = ps[arg];
  AlphaPoint best = at[arg];
  if (!std::isfinite(best.value)) {
    throw DivergentIntegral("Delta_2 or D_{p,2} diverges for every (p, alpha_zeta) tried");
  }
  const double step = n > 1 ? (s.hi - s.lo) / (n - 1) : 0.5 * (s.hi - s.lo);
  for (int sweep = 0; sweep < s.sweeps; ++sweep) {
    const auto r = numerics::golden_section_min(
        [&](double p) { return best_alpha(m, p, delta_mod, opts).value; },
        std::max(s.lo, p_star - step), std::min(s.hi, p_star + step), 0.0, s.refine_steps);
    if (r.value < best.value) {
      best = best_alpha(m, r.x, delta_mod, opts);
      p_star = r.x;
    }
  }
  return assemble(gamma2_closed(m, f_integral), p_star, best);
}

BoundResult theorem4_apply(const Theorem4Fit& fit, double x) {
  if (!(x > 0.0)) throw InvalidParameter("theorem4: x must be positive");
  BoundResult r;
  r.raw = fit.constant / (x * x);
  r.clamped = std::min(1.0, r.raw);
  r.alpha_star = fit.alpha_star;
  r.p_star = fit.p_star;
  return r;
}

BoundResult theorem4_bound(const OUModel& m, double x, double p, double f_integral,
                           const PowerModulus& delta_mod, double quad_tol) {
  Theorem4Options opts;
  opts.quad_tol = quad_tol;
  return theorem4_apply(theorem4_fit(m, p, f_integral, delta_mod, opts), x);
}

}  // namespace orlicz
