#pragma once

// Scalar numerical kernels shared by every module: bracketed bisection,
// golden-section search, adaptive Simpson quadrature and a geometric
// partition integrator for integrands with an integrable singularity at the
// left end of the interval.

#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <utility>

#include "orlicz/error.hpp"

namespace orlicz::numerics {

template <class F>
concept ScalarFunction = std::invocable<F, double> &&
                         std::convertible_to<std::invoke_result_t<F, double>, double>;

struct RootOptions {
  double rtol = 1e-10;
  int max_iter = 200;
};

/// Bisection on [lo, hi] for a function whose sign differs at the ends.
/// Runs until the bracket collapses to adjacent doubles, the relative
/// bracket width drops below `opts.rtol * 1e-6`, or the iteration cap is hit.
template <ScalarFunction F>
double bisect(F&& f, double lo, double hi, const RootOptions& opts = {}) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw InvalidParameter("bisect: no sign change on [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
  }
  const double width_tol = opts.rtol * 1e-6;
  for (int it = 0; it < opts.max_iter; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= width_tol * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return lo + 0.5 * (hi - lo);
}

struct Extremum {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal function on [a, b].
template <ScalarFunction F>
Extremum golden_section_max(F&& f, double a, double b, double width_tol, int max_iter = 400) {
  constexpr double inv_phi = 0.6180339887498948482;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > width_tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  // Endpoints are not probed by the interior iteration; keep the best seen.
  Extremum best = fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
  const double fa = f(a);
  const double fb = f(b);
  if (fa > best.value) best = {a, fa};
  if (fb > best.value) best = {b, fb};
  return best;
}

template <ScalarFunction F>
Extremum golden_section_min(F&& f, double a, double b, double width_tol, int max_iter = 400) {
  auto r = golden_section_max([&](double x) { return -f(x); }, a, b, width_tol, max_iter);
  return {r.x, -r.value};
}

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps || m <= a || m >= b) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature. The absolute target is
/// max(rel_tol * |coarse estimate|, abs_tol).
template <ScalarFunction F>
double adaptive_simpson(F&& f, double a, double b, double rel_tol, double abs_tol = 1e-300,
                        int max_depth = 48) {
  if (b == a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  // A five-point coarse value guards against a midpoint that happens to vanish.
  const double f1 = f(a + 0.25 * (b - a));
  const double f3 = f(a + 0.75 * (b - a));
  const double coarse = (b - a) / 12.0 * (fa + 4.0 * f1 + 2.0 * fm + 4.0 * f3 + fb);
  const double eps = std::max(rel_tol * std::abs(coarse), abs_tol);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, eps, max_depth);
}

struct SingularQuadResult {
  double value = 0.0;
  double tail_estimate = 0.0;  // geometric extrapolation of the unvisited part
  int segments = 0;
};

struct SingularQuadOptions {
  double rel_tol = 1e-8;
  int divergence_run = 8;  // consecutive non-decreasing segments that signal divergence
  int max_segments = 900;
};

/// Integrates f over (a, b] when f may blow up at a. The interval is cut into
/// geometric pieces [a + L 2^{-k-1}, a + L 2^{-k}], L = b - a, each integrated
/// by adaptive Simpson. Once successive piece ratios settle below one the
/// remaining tail is summed as a geometric series; ratios that stay at or
/// above one for `divergence_run` pieces raise DivergentIntegral.
template <ScalarFunction F>
SingularQuadResult integrate_singular_left(F&& f, double a, double b,
                                           const SingularQuadOptions& opts = {}) {
  SingularQuadResult out;
  if (!(b > a)) return out;
  const double length = b - a;
  double partial = 0.0;
  double prev = 0.0;
  double last_seg = 0.0;
  double ratio = 2.0;
  double prev_ratio = -1.0;
  int growing = 0;
  int zero_run = 0;
  auto finish = [&](double r) {
    out.tail_estimate = r < 1.0 ? last_seg * r / (1.0 - r) : 0.0;
    out.value = partial + out.tail_estimate;
    return out;
  };
  for (int k = 0; k < opts.max_segments; ++k) {
    const double hi = a + length * std::ldexp(1.0, -k);
    const double lo = a + length * std::ldexp(1.0, -k - 1);
    if (!(lo > a) || !(hi > lo)) {
      // Below floating-point resolution of the endpoint.
      if (ratio < 1.0) return finish(ratio);
      break;
    }
    const double seg = adaptive_simpson(f, lo, hi, 0.1 * opts.rel_tol);
    if (!std::isfinite(seg)) {
      throw DivergentIntegral("integrand is not finite near the singular endpoint");
    }
    partial += seg;
    last_seg = seg;
    out.segments = k + 1;
    const double mag = std::abs(seg);
    if (k == 0) {
      prev = mag;
      continue;
    }
    if (mag == 0.0) {
      if (++zero_run >= 4) return finish(0.0);
      prev = mag;
      continue;
    }
    zero_run = 0;
    prev_ratio = ratio;
    ratio = prev > 0.0 ? mag / prev : 2.0;
    prev = mag;
    if (ratio >= 1.0 - 1e-9) {
      if (++growing >= opts.divergence_run) {
        throw DivergentIntegral("segment contributions stop shrinking toward the singular endpoint");
      }
      continue;
    }
    growing = 0;
    if (k < 3) continue;
    const double target = opts.rel_tol * std::abs(partial);
    const double worst = std::max(ratio, prev_ratio);
    const bool tail_small = worst < 1.0 && mag * worst / (1.0 - worst) <= target;
    const bool tail_stable =
        prev_ratio < 1.0 && mag * std::abs(ratio - prev_ratio) / ((1.0 - ratio) * (1.0 - ratio)) <= target &&
        mag * ratio / (1.0 - ratio) <= 1e3 * std::abs(partial);
    if (tail_small || tail_stable) return finish(ratio);
  }
  throw DivergentIntegral("geometric partition exhausted without convergence");
}

}  // namespace orlicz::numerics
