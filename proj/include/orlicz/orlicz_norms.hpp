#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "orlicz/measure_grid.hpp"
#include "orlicz/nfunc.hpp"

namespace orlicz {

/// I.i.d. realisations of a random variable.
struct SampleSet {
  std::vector<double> values;
  std::uint64_t seed = 0;
};

struct NormEstimate {
  double value = 0.0;
  double std_error = 0.0;  // grouped jackknife, 20 blocks
};

/// Luxembourg norm inf{r > 0 : mean U(x_i / r) <= 1} of the empirical law.
double luxembourg_norm_samples(const NFunction& U, const SampleSet& xs);

/// Same, with a delete-one-block jackknife standard error.
NormEstimate luxembourg_norm_samples_with_error(const NFunction& U, const SampleSet& xs);

/// Luxembourg norm inf{r > 0 : sum_i w_i U(f(t_i) / r) <= 1} on a grid.
double luxembourg_norm_function(const NFunction& U, const std::function<double(double)>& f,
                                const MeasureGrid& g);

/// Weighted version on precomputed values, one per grid point.
double luxembourg_norm_values(const NFunction& U, std::span<const double> values,
                              std::span<const double> weights);

/// Orlicz norm of an indicator in the (U*) space: mu(A) U^{-1}(1 / mu(A)).
double indicator_orlicz_norm(const NFunction& U, double measure_A);

struct DualNormOptions {
  int search_steps = 200;  // golden-section steps for the constraint multiplier
};

/// Orlicz norm ||phi||_(U*) = sup { sum w_i phi_i v_i : sum w_i U(v_i) <= 1 }
/// over piecewise-constant v. The multiplier k of the constraint minimises
/// (1 + sum w_i U*(k |phi_i|)) / k; the candidate v_i attains Young's equality
/// at slope k |phi_i| and is rescaled onto the constraint. `warm_start`, when
/// given, is a second candidate. The result is the best feasible value found,
/// so it never exceeds the exact supremum.
double dual_orlicz_norm(const NFunction& U, std::span<const double> phi, const MeasureGrid& g,
                        const DualNormOptions& opts = {},
                        std::optional<std::span<const double>> warm_start = std::nullopt);

struct TailBound {
  double raw = 0.0;
  double clamped = 0.0;
};

/// P{|xi| > x} <= 1 / U(x / ||xi||_U); raw value and min(1, raw).
TailBound chebyshev_tail(const NFunction& U, double norm, double x);

/// ||f||_U * ||phi||_(U*) - sum w_i |f_i phi_i|; nonnegative by Hoelder.
double holder_residual(const NFunction& U, const std::function<double(double)>& f,
                       const std::function<double(double)>& phi, const MeasureGrid& g,
                       const DualNormOptions& opts = {});

}  // namespace orlicz
