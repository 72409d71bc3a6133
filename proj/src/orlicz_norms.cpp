#include "orlicz/orlicz_norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>

#include "orlicz/error.hpp"
#include "orlicz/numerics.hpp"

namespace orlicz {

double luxembourg_norm_values(const NFunction& U, std::span<const double> values,
                              std::span<const double> weights) {
  if (values.empty() || values.size() != weights.size()) {
    throw InvalidParameter("luxembourg norm: values and weights must be nonempty and equally long");
  }
  double peak = 0.0;
  double min_w = weights[0];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw InvalidParameter("luxembourg norm: non-finite value");
    peak = std::max(peak, std::abs(values[i]));
    min_w = std::min(min_w, weights[i]);
  }
  if (peak == 0.0) return 0.0;
  // Solve on values scaled to peak 1, so that scaling the input by a power
  // of two scales the result exactly.
  auto excess = [&](double r) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * U(values[i] / peak / r);
    return s - 1.0;
  };
  // The peak value alone forces mass >= 1 at r_lo; every term is <= 1e-12 at r_hi.
  const double r_lo = 1.0 / generalized_inverse(U, 1.0 / min_w);
  const double r_hi = 1.0 / generalized_inverse(U, 1e-12);
  return peak * numerics::bisect(excess, r_lo, r_hi);
}

double luxembourg_norm_samples(const NFunction& U, const SampleSet& xs) {
  if (xs.values.empty()) throw InvalidParameter("luxembourg_norm_samples: empty sample set");
  const std::vector<double> w(xs.values.size(), 1.0 / static_cast<double>(xs.values.size()));
  return luxembourg_norm_values(U, xs.values, w);
}

NormEstimate luxembourg_norm_samples_with_error(const NFunction& U, const SampleSet& xs) {
  NormEstimate est;
  est.value = luxembourg_norm_samples(U, xs);
  const std::size_t n = xs.values.size();
  constexpr std::size_t kBlocks = 20;
  if (n < 2 * kBlocks) return est;
  std::vector<double> leave_out;
  leave_out.reserve(kBlocks);
  for (std::size_t b = 0; b < kBlocks; ++b) {
    const std::size_t first = b * n / kBlocks;
    const std::size_t last = (b + 1) * n / kBlocks;
    SampleSet rest;
    rest.values.reserve(n - (last - first));
    rest.values.insert(rest.values.end(), xs.values.begin(), xs.values.begin() + first);
    rest.values.insert(rest.values.end(), xs.values.begin() + last, xs.values.end());
    leave_out.push_back(luxembourg_norm_samples(U, rest));
  }
  const double mean = std::accumulate(leave_out.begin(), leave_out.end(), 0.0) / kBlocks;
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  est.std_error = std::sqrt((kBlocks - 1.0) / kBlocks * ss);
  return est;
}

double luxembourg_norm_function(const NFunction& U, const std::function<double(double)>& f,
                                const MeasureGrid& g) {
  std::vector<double> vals(g.size());
  const auto pts = g.points();
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f(pts[i]);
  return luxembourg_norm_values(U, vals, g.weights());
}

double indicator_orlicz_norm(const NFunction& U, double measure_A) {
  if (!(measure_A > 0.0) || !std::isfinite(measure_A)) {
    throw InvalidParameter("indicator_orlicz_norm: measure must be positive");
  }
  return measure_A * generalized_inverse(U, 1.0 / measure_A);
}

namespace {

// s (1 + sum_i w_i U*(a_i / s)); convex in s, its infimum is the dual norm.
double amemiya(const NFunction& U, std::span<const double> a, std::span<const double> w, double s) {
  double sum = 0.0;
  try {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] > 0.0) sum += w[i] * conjugate(U, a[i] / s);
    }
  } catch (const DomainOverflow&) {
    return std::numeric_limits<double>::infinity();
  }
  return s * (1.0 + sum);
}

// Objective of a candidate v after rescaling it onto sum w U(v) = 1.
double candidate_value(const NFunction& U, std::span<const double> a, std::span<const double> w,
                       std::span<const double> v) {
  const double r = luxembourg_norm_values(U, v, w);
  if (r == 0.0) return 0.0;
  double obj = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) obj += w[i] * a[i] * (std::abs(v[i]) / r);
  return obj;
}

}  // namespace

double dual_orlicz_norm(const NFunction& U, std::span<const double> phi, const MeasureGrid& g,
                        const DualNormOptions& opts,
                        std::optional<std::span<const double>> warm_start) {
  const std::size_t n = g.size();
  if (phi.size() != n) throw InvalidParameter("dual_orlicz_norm: phi size differs from grid");
  const auto w = g.weights();
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = std::abs(phi[i]);
  const double amax = *std::max_element(a.begin(), a.end());
  if (amax == 0.0) return 0.0;

  // The multiplier 1/s of the constraint, on a log scale around amax: a unit
  // grid first (U* overflows for small s), then golden section next to the best node.
  auto f = [&](double ls) { return amemiya(U, a, w, amax * std::exp(ls)); };
  double node = 0.0;
  double node_value = f(0.0);
  for (int k = -69; k <= 69; ++k) {
    const double v = f(k);
    if (v < node_value) {
      node = k;
      node_value = v;
    }
  }
  const auto best = numerics::golden_section_min(f, node - 1.0, node + 1.0, 1e-13,
                                                 std::max(opts.search_steps, 1));
  const double s = amax * std::exp(best.x);

  // Young's equality point at slope a_i / s is the maximising v.
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = conjugate_argmax(U, a[i] / s);
  double value = candidate_value(U, a, w, v);
  if (warm_start && warm_start->size() == n) {
    value = std::max(value, candidate_value(U, a, w, *warm_start));
  }
  return value;
}

TailBound chebyshev_tail(const NFunction& U, double norm, double x) {
  if (!(norm > 0.0) || !(x > 0.0)) {
    throw InvalidParameter("chebyshev_tail: norm and x must be positive");
  }
  TailBound out;
  try {
    out.raw = 1.0 / U(x / norm);
  } catch (const DomainOverflow&) {
    out.raw = 0.0;  // U beyond its finite range: the bound is below any double
  }
  out.clamped = std::min(1.0, out.raw);
  return out;
}

double holder_residual(const NFunction& U, const std::function<double(double)>& f,
                       const std::function<double(double)>& phi, const MeasureGrid& g,
                       const DualNormOptions& opts) {
  const auto pts = g.points();
  const auto w = g.weights();
  std::vector<double> fv(g.size());
  std::vector<double> pv(g.size());
  double inner = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    fv[i] = f(pts[i]);
    pv[i] = phi(pts[i]);
    inner += w[i] * std::abs(fv[i] * pv[i]);
  }
  const double f_norm = luxembourg_norm_values(U, fv, w);
  if (f_norm == 0.0) return -inner;
  const double phi_norm = dual_orlicz_norm(U, pv, g, opts, std::span<const double>(fv));
  return f_norm * phi_norm - inner;
}

}  // namespace orlicz
