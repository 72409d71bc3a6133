#pragma once

// Majorizing-measure bounds for the supremum of averaged deviations:
// zeta_1, nu_t, C_p, Z(x), the class-E tail of eta_f, the mixed bound built
// from the Chebyshev tail of the mean deviation plus Z, and the L_q bound
// with its Gamma_q, Delta_q and D_{p,q} ingredients.
//
// eta_f, the random Orlicz norm of the normalised increment field, is never
// computed pathwise; only its tail bounds appear here.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "orlicz/measure_grid.hpp"
#include "orlicz/nfunc.hpp"
#include "orlicz/orlicz_norms.hpp"

namespace orlicz {

using PairMap = std::function<double(double, double)>;

/// Increasing continuous sigma with sigma(0+) = 0 bounding the increment
/// norm: sup_{|t-s| <= h} ||X(t) - X(s)|| <= sigma(h).
struct SigmaModulus {
  RealMap sigma;
  RealMap sigma_inv;  // sup{s : sigma(s) <= h}

  /// sigma(h) = scale * h^exponent with its closed-form inverse.
  static SigmaModulus power(double scale, double exponent);
  /// Generalised inverse found by bisection on [0, h_max].
  static SigmaModulus from_sigma(RealMap sigma, double h_max);
};

/// zeta(u) = u^alpha; gamma(u) = u / zeta(u) = u^{1 - alpha}.
struct ZetaSpec {
  double alpha = 1.0;

  double zeta(double u) const;
  double zeta_inv(double u) const;
  double gamma(double u) const;
};

/// Process metric d, drift f with modulus delta, and the shifted metric d_f.
struct DeviationModel {
  PairMap d;
  RealMap f;
  RealMap delta;
  PairMap d_f;
};

/// Sampled checks of the SigmaModulus contract on [0, h_max].
std::vector<std::string> check_sigma(const SigmaModulus& sm, double h_max);

/// Sampled checks of symmetry, zero diagonal, |f(u)-f(v)| <= delta(d) <= d,
/// and d(u,v) <= sigma(|u-v|) on grid point pairs.
std::vector<std::string> check_deviation_model(const DeviationModel& dm, const MeasureGrid& g,
                                               const SigmaModulus& sm);

struct SearchSpec {
  double lo = 0.05;
  double hi = 0.95;
  int grid = 19;
  int refine_steps = 30;
  int sweeps = 2;
};

struct BoundQuery {
  std::vector<double> x_grid;
  SearchSpec p_search;
  SearchSpec alpha_search;
  double quad_tol = 1e-6;
};

struct BoundResult {
  double raw = 0.0;
  double clamped = 0.0;
  double alpha_star = 0.0;
  double p_star = 0.0;
};

/// zeta(2 sigma(sup_s |t - s|)).
double zeta1(double t, const MeasureGrid& g, const SigmaModulus& sm, const ZetaSpec& z);

/// mu of the ball around t with radius sigma^{-1}(zeta^{-1}(u) / 2).
double nu_t(double t, double u, const MeasureGrid& g, const SigmaModulus& sm, const ZetaSpec& z);

/// (1 / (p (1-p))) int_0^{p zeta_1(t)} h(nu_t(u)) du at a single t.
double nu_integral_at(double t, double p, const std::function<double(double)>& h,
                      const MeasureGrid& g, const SigmaModulus& sm, const ZetaSpec& z,
                      double quad_tol);

/// C_p = sup_t (1/(p(1-p))) int_0^{p zeta_1(t)} U^{-1}(nu_t(u)^{-2}) du.
/// Throws DivergentIntegral when the integral is infinite.
double c_p(double p, const MeasureGrid& g, const SigmaModulus& sm, const ZetaSpec& z,
           const NFunction& U, double quad_tol);

/// D_{p,q} = sup_t (1/(p(1-p))) int_0^{p zeta_1(t)} nu_t(u)^{-2/q} du.
double d_pq_quad(double p, double q_exp, const MeasureGrid& g, const SigmaModulus& sm,
                 const ZetaSpec& z, double quad_tol);

/// The D_{p,q} integral at one t, without the sup.
double d_pq_at(double t, double p, double q_exp, const MeasureGrid& g, const SigmaModulus& sm,
               const ZetaSpec& z, double quad_tol);

/// int_S int_S integrand(u, v) d(mu x mu). Discrete grids use exact weighted
/// sums with `diagonal` in place of the integrand at u == v. Lebesgue grids
/// use nested adaptive quadrature, the inner integral split at v = u and
/// refined geometrically toward the diagonal.
double integrate_product(const MeasureGrid& g, const PairMap& integrand, double quad_tol,
                         double diagonal = 0.0);

/// Z(x) = int int [chi{gamma(d_f) / x <= 1} + (1 + U(x0)) K(gamma(d_f) / x)].
/// Pairs with d_f = 0 contribute the indicator only.
double z_of_x(double x, const DeviationModel& dm, const ZetaSpec& z, const NFunction& U,
              const MeasureGrid& g, double quad_tol = 1e-6);

/// Z(r) B / U(x / (D r)) for U in Delta2 and class E with z0 = 0.
TailBound eta_tail_class_e(double x, double r, const DeviationModel& dm, const ZetaSpec& z,
                           const NFunction& U, const MeasureGrid& g, double quad_tol = 1e-6);

/// inf over (alpha, p) of 1/U(alpha x / m) + Z((1 - alpha) x / C_p), with
/// m = ||mean deviation||_U. Coarse grid on the search box, then alternating
/// golden-section refinement of each coordinate.
BoundResult theorem1_bound(double x, double mean_dev_norm, const DeviationModel& dm,
                           const ZetaSpec& z, const NFunction& U, const MeasureGrid& g,
                           const SigmaModulus& sm, const BoundQuery& q);

struct LqResult {
  double raw = 0.0;
  double clamped = 0.0;
  double p_star = 0.0;
};

/// The value x^{-q} (Gamma^{1/(q+1)} + (D_p^q Delta)^{1/(q+1)})^{q+1} at one p.
double lq_bound_at(double x, double q_exp, double gamma_q, double delta_q, double d_pq);

/// min over p of lq_bound_at, p searched by grid plus golden refinement.
LqResult lq_bound(double x, double q_exp, double gamma_q, double delta_q,
                  const std::function<double(double)>& d_pq_fn, const SearchSpec& p_search);

/// Fills `out` (one value per grid point) with path `index` of a sampler
/// seeded by `seed`.
using PathSampler =
    std::function<void(std::uint64_t seed, std::uint64_t index, std::span<double> out)>;

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo E|int_S (X(u) - f(u)) dmu(u) / mu(S)|^q.
McEstimate gamma_q_mc(double q_exp, const RealMap& f, const MeasureGrid& g,
                      const PathSampler& sampler, std::uint64_t n_paths, std::uint64_t seed);

/// Delta_q = int int gamma(d_f(u, v))^q d(mu x mu).
double delta_q_quad(double q_exp, const DeviationModel& dm, const ZetaSpec& z,
                    const MeasureGrid& g, double quad_tol);

}  // namespace orlicz
