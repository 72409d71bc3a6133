#pragma once

// Monte Carlo side: counter-based normals, exact AR(1) sampling of the OU
// process on a grid, empirical tails of sup_t |X(t) - f(t)| and their
// comparison with a theoretical bound.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "orlicz/bound_engine.hpp"
#include "orlicz/measure_grid.hpp"
#include "orlicz/ou_model.hpp"

namespace orlicz {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Wichura's AS241 rational approximation of the standard normal quantile.
double normal_quantile(double p);

/// Stream of variates for path `index` under `seed`. The Philox key is the
/// seed and the counter is (block, index), so every path can be generated
/// independently and in any order.
class PathStream {
 public:
  PathStream(std::uint64_t seed, std::uint64_t index);

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t index_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
};

struct PathBatch {
  std::size_t n_paths = 0;
  MeasureGrid grid;
  std::vector<double> values;  // row-major, n_paths x grid.size()
  std::uint64_t seed = 0;

  std::span<const double> path(std::size_t i) const;
};

/// X(t_0) ~ N(0,1), X(t_{i+1}) = rho_i X(t_i) + sqrt(1 - rho_i^2) eps_i with
/// rho_i = exp(-tau (t_{i+1} - t_i)). Points must be increasing.
void sample_ou_path(const OUModel& m, std::span<const double> points, std::uint64_t seed,
                    std::uint64_t index, std::span<double> out);

/// n_paths paths on n_points equispaced nodes of [0, T], trapezoid weights.
PathBatch sample_ou_batch(const OUModel& m, int n_points, std::size_t n_paths, std::uint64_t seed);

/// Every stride-th node of each path (first and last nodes kept when the
/// stride divides n - 1).
PathBatch subsample(const PathBatch& b, int stride);

/// PathSampler for gamma_q_mc drawing OU paths on the given points.
PathSampler ou_path_sampler(const OUModel& m, std::vector<double> points);

/// Per path max_i |X(t_i) - f(t_i)|.
std::vector<double> sup_deviation(const PathBatch& b, const RealMap& f);

/// Per path sup_i |X(t_i) - f(t_i) - (1/mu(S)) sum_j w_j (X(t_j) - f(t_j))|.
std::vector<double> averaged_deviation_stat(const PathBatch& b, const RealMap& f);

struct TailReport {
  std::vector<double> x_grid;
  std::vector<double> empirical;
  std::vector<double> ci_halfwidth;  // Wilson 99%
  std::vector<double> bound_raw;
  std::vector<double> bound_clamped;
  std::vector<double> alpha_star;
  std::vector<double> p_star;
  std::vector<bool> dominated;
  std::size_t n_paths = 0;

  bool all_dominated() const;
};

inline constexpr double kWilsonZ99 = 2.5758293035489004;

/// Wilson score interval half-width for a proportion.
double wilson_halfwidth(double p_hat, std::size_t n, double z = kWilsonZ99);

/// Fraction of sup statistics strictly above each x, with Wilson half-widths.
TailReport empirical_tail(std::span<const double> stats, const std::vector<double>& x_grid);

TailReport empirical_sup_tail(const PathBatch& b, const RealMap& f, const std::vector<double>& x_grid);

/// Joins an empirical tail with bound_fn(x). A row is dominated when the
/// clamped bound is 1, or when raw >= empirical - 3 sqrt(p(1-p)/N).
TailReport domination_report(const PathBatch& b, const RealMap& f,
                             const std::function<BoundResult(double)>& bound_fn,
                             const std::vector<double>& x_grid);

/// Fills the bound columns of an existing empirical report.
void attach_bound(TailReport& r, const std::function<BoundResult(double)>& bound_fn);

}  // namespace orlicz
