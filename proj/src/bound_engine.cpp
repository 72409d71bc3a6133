#include "orlicz/bound_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "orlicz/error.hpp"
#include "orlicz/numerics.hpp"
#include "orlicz/parallel.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

SigmaModulus SigmaModulus::power(double scale, double exponent) {
  require(scale > 0.0 && exponent > 0.0, "SigmaModulus::power: scale and exponent must be positive");
  return {[scale, exponent](double h) { return h <= 0.0 ? 0.0 : scale * std::pow(h, exponent); },
          [scale, exponent](double s) {
            return s <= 0.0 ? 0.0 : std::pow(s / scale, 1.0 / exponent);
          }};
}

SigmaModulus SigmaModulus::from_sigma(RealMap sigma, double h_max) {
  require(h_max > 0.0, "SigmaModulus::from_sigma: h_max must be positive");
  RealMap inv = [sigma, h_max](double s) {
    if (s <= 0.0) return 0.0;
    if (sigma(h_max) <= s) return h_max;
    // Largest h with sigma(h) <= s.
    double lo = 0.0;
    double hi = h_max;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * h_max; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sigma(mid) <= s) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  };
  return {std::move(sigma), std::move(inv)};
}

double ZetaSpec::zeta(double u) const { return u <= 0.0 ? 0.0 : std::pow(u, alpha); }
double ZetaSpec::zeta_inv(double u) const { return u <= 0.0 ? 0.0 : std::pow(u, 1.0 / alpha); }
double ZetaSpec::gamma(double u) const {
  if (u > 0.0) return std::pow(u, 1.0 - alpha);
  return alpha < 1.0 ? 0.0 : (alpha == 1.0 ? 1.0 : kInf);
}

std::vector<std::string> check_sigma(const SigmaModulus& sm, double h_max) {
  std::vector<std::string> bad;
  double prev = sm.sigma(0.0);
  if (prev > 1e-12) bad.push_back("sigma(0) is not 0");
  double prev_inv = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double h = h_max * i / 200.0;
    const double s = sm.sigma(h);
    if (s < prev) bad.push_back("sigma decreases at h=" + num(h));
    prev = s;
    const double inv = sm.sigma_inv(s);
    if (sm.sigma(inv) > s + 1e-10) bad.push_back("sigma(sigma_inv(s)) > s at s=" + num(s));
    if (inv < prev_inv) bad.push_back("sigma_inv decreases at s=" + num(s));
    prev_inv = inv;
  }
  return bad;
}

std::vector<std::string> check_deviation_model(const DeviationModel& dm, const MeasureGrid& g,
                                               const SigmaModulus& sm) {
  std::vector<std::string> bad;
  const auto pts = g.points();
  const std::size_t stride = std::max<std::size_t>(1, pts.size() / 32);
  constexpr double tol = 1e-12;
  for (std::size_t i = 0; i < pts.size(); i += stride) {
    const double u = pts[i];
    if (std::abs(dm.d(u, u)) > tol || std::abs(dm.d_f(u, u)) > tol) {
      bad.push_back("metric not zero on the diagonal at " + num(u));
    }
    for (std::size_t j = 0; j < pts.size(); j += stride) {
      const double v = pts[j];
      const double d = dm.d(u, v);
      if (d < 0.0 || std::abs(d - dm.d(v, u)) > tol) bad.push_back("d not symmetric/nonnegative");
      const double df = dm.d_f(u, v);
      if (df < 0.0 || std::abs(df - dm.d_f(v, u)) > tol) bad.push_back("d_f not symmetric/nonnegative");
      const double jump = std::abs(dm.f(u) - dm.f(v));
      const double dl = dm.delta(d);
      if (jump > dl + tol || dl > d + tol) {
        bad.push_back("|f(u)-f(v)| <= delta(d) <= d fails at (" + num(u) + ", " + num(v) + ")");
      }
      if (d > sm.sigma(std::abs(u - v)) + tol) {
        bad.push_back("d > sigma(|u-v|) at (" + num(u) + ", " + num(v) + ")");
      }
    }
  }
  return bad;
}

double zeta1(double t, const MeasureGrid& g, const SigmaModulus& sm, const ZetaSpec& z) {
  return z.zeta(2.0 * sm.sigma(g.radius_from(t)));
}

double nu_t(double t, double u, const MeasureGrid& g, const SigmaModulus& sm, const ZetaSpec& z) {
  if (!(u > 0.0)) return 0.0;
  const double r = sm.sigma_inv(0.5 * z.zeta_inv(u));
  return g.ball_measure(t, r);
}

double nu_integral_at(double t, double p, const std::function<double(double)>& h,
                      const MeasureGrid& g, const SigmaModulus& sm, const ZetaSpec& z,
                      double quad_tol) {
  require(p > 0.0 && p < 1.0, "p must lie in (0, 1)");
  require(quad_tol > 0.0, "quad_tol must be positive");
  const double upper = p * zeta1(t, g, sm, z);
  auto integrand = [&](double u) {
    const double m = nu_t(t, u, g, sm, z);
    return m > 0.0 ? h(m) : kInf;
  };
  numerics::SingularQuadOptions opts;
  opts.rel_tol = quad_tol;
  const auto res = numerics::integrate_singular_left(integrand, 0.0, upper, opts);
  return res.value / (p * (1.0 - p));
}

namespace {

double sup_over_t(const MeasureGrid& g, const std::function<double(double)>& at_t) {
  const auto ts = g.sup_points();
  std::vector<double> vals(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) { vals[i] = at_t(ts[i]); });
  double best = 0.0;
  for (double v : vals) best = std::max(best, v);
  return best;
}

}  // namespace

double c_p(double p, const MeasureGrid& g, const SigmaModulus& sm, const ZetaSpec& z,
           const NFunction& U, double quad_tol) {
  const std::function<double(double)> h = [&U](double m) {
    return generalized_inverse(U, 1.0 / (m * m));
  };
  try {
    return sup_over_t(g, [&](double t) { return nu_integral_at(t, p, h, g, sm, z, quad_tol); });
  } catch (const DivergentIntegral& e) {
    throw DivergentIntegral(
        std::string("C_p diverges: sup_t int_0^{zeta_1(t)} U^{-1}(nu_t(u)^{-2}) du is not finite (") +
        e.what() + ")");
  }
}

double d_pq_at(double t, double p, double q_exp, const MeasureGrid& g, const SigmaModulus& sm,
               const ZetaSpec& z, double quad_tol) {
  require(q_exp > 1.0, "q must exceed 1");
  const double power = -2.0 / q_exp;
  const std::function<double(double)> h = [power](double m) { return std::pow(m, power); };
  return nu_integral_at(t, p, h, g, sm, z, quad_tol);
}

double d_pq_quad(double p, double q_exp, const MeasureGrid& g, const SigmaModulus& sm,
                 const ZetaSpec& z, double quad_tol) {
  try {
    return sup_over_t(g, [&](double t) { return d_pq_at(t, p, q_exp, g, sm, z, quad_tol); });
  } catch (const DivergentIntegral& e) {
    throw DivergentIntegral(
        std::string("D_{p,q} diverges: sup_t int_0^{zeta_1(t)} nu_t(u)^{-2/q} du is not finite (") +
        e.what() + ")");
  }
}

double integrate_product(const MeasureGrid& g, const PairMap& integrand, double quad_tol,
                         double diagonal) {
  const auto pts = g.points();
  const auto w = g.weights();
  if (!g.is_lebesgue()) {
    std::vector<double> rows(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      double s = 0.0;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        s += w[j] * (i == j ? diagonal : integrand(pts[i], pts[j]));
      }
      rows[i] = w[i] * s;
    });
    double total = 0.0;
    for (double r : rows) total += r;
    return total;
  }
  const double lo = g.lo();
  const double hi = g.hi();
  const double density = g.total_measure() / (hi - lo);
  // Row values carry quadrature noise; keep it well under the outer target
  // or the outer refinement chases it.
  numerics::SingularQuadOptions inner;
  inner.rel_tol = 1e-3 * quad_tol;
  auto row = [&](double u) {
    auto left = [&](double s) { return integrand(u, u - s); };
    auto right = [&](double s) { return integrand(u, u + s); };
    return numerics::integrate_singular_left(left, 0.0, u - lo, inner).value +
           numerics::integrate_singular_left(right, 0.0, hi - u, inner).value;
  };
  // Equal outer panels integrated independently and reduced in index order.
  // Rows behave like a fractional power of the distance to lo and hi, so the
  // two end panels are cut geometrically toward the boundary.
  constexpr int kPanels = 16;
  constexpr int kOuterDepth = 30;
  numerics::SingularQuadOptions edge;
  edge.rel_tol = 0.5 * quad_tol;
  std::vector<double> panel(kPanels);
  parallel_for(kPanels, [&](std::size_t k) {
    const double a = lo + (hi - lo) * static_cast<double>(k) / kPanels;
    const double b = k + 1 == kPanels ? hi : lo + (hi - lo) * static_cast<double>(k + 1) / kPanels;
    if (k == 0) {
      panel[k] = numerics::integrate_singular_left([&](double s) { return row(lo + s); }, 0.0, b - lo, edge).value;
    } else if (k + 1 == kPanels) {
      panel[k] = numerics::integrate_singular_left([&](double s) { return row(hi - s); }, 0.0, hi - a, edge).value;
    } else {
      panel[k] = numerics::adaptive_simpson(row, a, b, 0.5 * quad_tol, 1e-300, kOuterDepth);
    }
  });
  double total = 0.0;
  for (double v : panel) total += v;
  return density * density * total;
}

double z_of_x(double x, const DeviationModel& dm, const ZetaSpec& z, const NFunction& U,
              const MeasureGrid& g, double quad_tol) {
  require(x > 0.0, "z_of_x: x must be positive");
  const auto& d2 = U.delta2();
  if (!d2) throw CapabilityError(U.name() + " carries no Delta2 metadata (K, x0)");
  const double lift = 1.0 + U(d2->x0);
  const RealMap K = d2->K;
  auto integrand = [&](double u, double v) {
    const double df = dm.d_f(u, v);
    if (df <= 0.0) return 1.0;
    const double ratio = z.gamma(df) / x;
    return (ratio <= 1.0 ? 1.0 : 0.0) + lift * K(ratio);
  };
  return integrate_product(g, integrand, quad_tol, 1.0);
}

TailBound eta_tail_class_e(double x, double r, const DeviationModel& dm, const ZetaSpec& z,
                           const NFunction& U, const MeasureGrid& g, double quad_tol) {
  require(x > 0.0 && r > 0.0, "eta_tail_class_e: x and r must be positive");
  const auto& e = U.class_e();
  if (!e) throw CapabilityError(U.name() + " carries no class E constants");
  if (e->z0 != 0.0) throw CapabilityError(U.name() + ": class E tail needs z0 = 0");
  const double zr = z_of_x(r, dm, z, U, g, quad_tol);
  TailBound out;
  try {
    out.raw = zr * e->B / U(x / (e->D * r));
  } catch (const DomainOverflow&) {
    out.raw = 0.0;
  }
  out.clamped = std::min(1.0, out.raw);
  return out;
}

namespace {

struct BoxOptimum {
  double a = 0.0;
  double p = 0.0;
  double value = kInf;
};

std::vector<double> grid_points(const SearchSpec& s) {
  std::vector<double> v(std::max(s.grid, 1));
  if (v.size() == 1) {
    v[0] = 0.5 * (s.lo + s.hi);
    return v;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = s.lo + (s.hi - s.lo) * static_cast<double>(i) / static_cast<double>(v.size() - 1);
  }
  return v;
}

double grid_step(const SearchSpec& s) {
  return s.grid > 1 ? (s.hi - s.lo) / (s.grid - 1) : 0.5 * (s.hi - s.lo);
}

}  // namespace

BoundResult theorem1_bound(double x, double mean_dev_norm, const DeviationModel& dm,
                           const ZetaSpec& z, const NFunction& U, const MeasureGrid& g,
                           const SigmaModulus& sm, const BoundQuery& q) {
  require(x > 0.0 && mean_dev_norm > 0.0, "theorem1_bound: x and mean_dev_norm must be positive");
  const auto as = grid_points(q.alpha_search);
  const auto ps = grid_points(q.p_search);
  require(as.front() > 0.0 && as.back() < 1.0, "alpha search must stay inside (0, 1)");
  require(ps.front() > 0.0 && ps.back() < 1.0, "p search must stay inside (0, 1)");

  auto mean_term = [&](double a) {
    try {
      return 1.0 / U(a * x / mean_dev_norm);
    } catch (const DomainOverflow&) {
      return 0.0;
    }
  };
  auto cp_of = [&](double p) { return c_p(p, g, sm, z, U, q.quad_tol); };
  auto objective = [&](double a, double cp) {
    return mean_term(a) + z_of_x((1.0 - a) * x / cp, dm, z, U, g, q.quad_tol);
  };

  std::vector<double> cps(ps.size());
  for (std::size_t j = 0; j < ps.size(); ++j) cps[j] = cp_of(ps[j]);

  std::vector<double> cells(as.size() * ps.size());
  parallel_for(cells.size(), [&](std::size_t k) {
    const std::size_t j = k / as.size();
    const std::size_t i = k % as.size();
    cells[k] = objective(as[i], cps[j]);
  });
  BoxOptimum best;
  double best_cp = 0.0;
  for (std::size_t j = 0; j < ps.size(); ++j) {
    for (std::size_t i = 0; i < as.size(); ++i) {
      const double v = cells[j * as.size() + i];
      if (v < best.value) {
        best = {as[i], ps[j], v};
        best_cp = cps[j];
      }
    }
  }

  const double step_a = grid_step(q.alpha_search);
  const double step_p = grid_step(q.p_search);
  for (int sweep = 0; sweep < q.alpha_search.sweeps; ++sweep) {
    const double lo_a = std::max(q.alpha_search.lo, best.a - step_a);
    const double hi_a = std::min(q.alpha_search.hi, best.a + step_a);
    const double cp_now = best_cp;
    const auto ra = numerics::golden_section_min([&](double a) { return objective(a, cp_now); },
                                                 lo_a, hi_a, 0.0, q.alpha_search.refine_steps);
    if (ra.value < best.value) {
      best.a = ra.x;
      best.value = ra.value;
    }
    if (sweep >= q.p_search.sweeps) continue;
    const double lo_p = std::max(q.p_search.lo, best.p - step_p);
    const double hi_p = std::min(q.p_search.hi, best.p + step_p);
    const double a_now = best.a;
    const auto rp = numerics::golden_section_min([&](double p) { return objective(a_now, cp_of(p)); },
                                                 lo_p, hi_p, 0.0, q.p_search.refine_steps);
    if (rp.value < best.value) {
      best.p = rp.x;
      best.value = rp.value;
      best_cp = cp_of(rp.x);
    }
  }
  return {best.value, std::min(1.0, best.value), best.a, best.p};
}

double lq_bound_at(double x, double q_exp, double gamma_q, double delta_q, double d_pq) {
  const double e = 1.0 / (q_exp + 1.0);
  const double inner = std::pow(gamma_q, e) + std::pow(std::pow(d_pq, q_exp) * delta_q, e);
  return std::pow(inner, q_exp + 1.0) * std::pow(x, -q_exp);
}

LqResult lq_bound(double x, double q_exp, double gamma_q, double delta_q,
                  const std::function<double(double)>& d_pq_fn, const SearchSpec& p_search) {
  require(x > 0.0, "lq_bound: x must be positive");
  require(q_exp > 1.0, "lq_bound: q must exceed 1");
  require(gamma_q >= 0.0 && delta_q >= 0.0 && std::isfinite(gamma_q) && std::isfinite(delta_q),
          "lq_bound: Gamma_q and Delta_q must be finite and nonnegative");
  // The x^{-q} prefactor factors out, so p* does not depend on x.
  auto constant = [&](double p) { return lq_bound_at(1.0, q_exp, gamma_q, delta_q, d_pq_fn(p)); };
  const auto ps = grid_points(p_search);
  std::vector<double> vals(ps.size());
  parallel_for(ps.size(), [&](std::size_t j) { vals[j] = constant(ps[j]); });
  std::size_t arg = 0;
  for (std::size_t j = 1; j < ps.size(); ++j) {
    if (vals[j] < vals[arg]) arg = j;
  }
  double p_star = ps[arg];
  double c_star = vals[arg];
  const double step = grid_step(p_search);
  for (int sweep = 0; sweep < p_search.sweeps; ++sweep) {
    const auto r = numerics::golden_section_min(constant, std::max(p_search.lo, p_star - step),
                                                std::min(p_search.hi, p_star + step), 0.0,
                                                p_search.refine_steps);
    if (r.value < c_star) {
      c_star = r.value;
      p_star = r.x;
    }
  }
  LqResult out;
  out.p_star = p_star;
  out.raw = lq_bound_at(x, q_exp, gamma_q, delta_q, d_pq_fn(p_star));
  out.clamped = std::min(1.0, out.raw);
  return out;
}

McEstimate gamma_q_mc(double q_exp, const RealMap& f, const MeasureGrid& g,
                      const PathSampler& sampler, std::uint64_t n_paths, std::uint64_t seed) {
  require(q_exp > 1.0, "gamma_q_mc: q must exceed 1");
  require(n_paths > 0, "gamma_q_mc: n_paths must be positive");
  const auto pts = g.points();
  const auto w = g.weights();
  std::vector<double> fv(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) fv[i] = f(pts[i]);
  std::vector<double> per_path(n_paths);
  parallel_for(n_paths, [&](std::size_t k) {
    std::vector<double> path(pts.size());
    sampler(seed, k, path);
    double avg = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) avg += w[i] * (path[i] - fv[i]);
    avg /= g.total_measure();
    per_path[k] = std::pow(std::abs(avg), q_exp);
  });
  double sum = 0.0;
  for (double v : per_path) sum += v;
  const double mean = sum / static_cast<double>(n_paths);
  double ss = 0.0;
  for (double v : per_path) ss += (v - mean) * (v - mean);
  const double var = n_paths > 1 ? ss / static_cast<double>(n_paths - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n_paths))};
}

double delta_q_quad(double q_exp, const DeviationModel& dm, const ZetaSpec& z,
                    const MeasureGrid& g, double quad_tol) {
  require(q_exp > 1.0, "delta_q_quad: q must exceed 1");
  auto integrand = [&](double u, double v) {
    const double df = dm.d_f(u, v);
    if (df <= 0.0) return 0.0;
    return std::pow(z.gamma(df), q_exp);
  };
  try {
    return integrate_product(g, integrand, quad_tol, 0.0);
  } catch (const DivergentIntegral& e) {
    throw DivergentIntegral(std::string("Delta_q is not finite: ") + e.what());
  }
}

}  // namespace orlicz
