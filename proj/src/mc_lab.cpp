#include "orlicz/mc_lab.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz/error.hpp"
#include "orlicz/parallel.hpp"

namespace orlicz {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidParameter("normal_quantile: p must lie in (0, 1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
             45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
          133.14166789178437745) * r + 3.387132872796366608);
    const double den =
        (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
             21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
          42.313330701600911252) * r + 1.0);
    return q * num / den;
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
             1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
          4.6303378461565452959) * r + 1.42343711074968357734);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
             0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
          2.05319162663775882187) * r + 1.0);
    x = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
             0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
          5.4637849111641143699) * r + 6.6579046435011037772);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
             7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
          0.59983220655588793769) * r + 1.0);
    x = num / den;
  }
  return q < 0.0 ? -x : x;
}

PathStream::PathStream(std::uint64_t seed, std::uint64_t index)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, index_(index) {}

void PathStream::refill() {
  buf_ = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                     static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32)},
                    key_);
  ++block_;
  used_ = 0;
}

double PathStream::uniform() {
  if (used_ > 2) refill();
  const std::uint64_t bits =
      (static_cast<std::uint64_t>(buf_[used_]) << 32 | buf_[used_ + 1]) >> 11;
  used_ += 2;
  return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

double PathStream::normal() { return normal_quantile(uniform()); }

std::span<const double> PathBatch::path(std::size_t i) const {
  const std::size_t n = grid.size();
  return std::span<const double>(values).subspan(i * n, n);
}

void sample_ou_path(const OUModel& m, std::span<const double> points, std::uint64_t seed,
                    std::uint64_t index, std::span<double> out) {
  if (out.size() != points.size() || points.empty()) {
    throw InvalidParameter("sample_ou_path: output size must match the number of points");
  }
  PathStream rng(seed, index);
  double x = rng.normal();
  out[0] = x;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double rho = std::exp(-m.tau * (points[i] - points[i - 1]));
    const double s = std::sqrt(-std::expm1(-2.0 * m.tau * (points[i] - points[i - 1])));
    x = rho * x + s * rng.normal();
    out[i] = x;
  }
}

PathBatch sample_ou_batch(const OUModel& m, int n_points, std::size_t n_paths, std::uint64_t seed) {
  if (n_points < 2) throw InvalidParameter("sample_ou_batch: need at least 2 grid points");
  if (n_paths < 1) throw InvalidParameter("sample_ou_batch: need at least 1 path");
  if (!(m.tau > 0.0 && m.T > 0.0)) throw InvalidParameter("sample_ou_batch: tau and T must be positive");
  auto grid = MeasureGrid::trapezoid(0.0, m.T, n_points);
  const std::size_t n = grid.size();
  std::vector<double> values(n * n_paths);
  const auto pts = grid.points();
  parallel_for(n_paths, [&](std::size_t k) {
    sample_ou_path(m, pts, seed, k, std::span<double>(values).subspan(k * n, n));
  });
  return PathBatch{n_paths, std::move(grid), std::move(values), seed};
}

PathBatch subsample(const PathBatch& b, int stride) {
  if (stride < 1) throw InvalidParameter("subsample: stride must be positive");
  const auto pts = b.grid.points();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); i += static_cast<std::size_t>(stride)) keep.push_back(i);
  if (keep.size() < 2) throw InvalidParameter("subsample: stride leaves fewer than 2 points");
  std::vector<double> sub_pts;
  for (auto i : keep) sub_pts.push_back(pts[i]);
  const double h = sub_pts[1] - sub_pts[0];
  std::vector<double> w(sub_pts.size(), h);
  w.front() = w.back() = 0.5 * h;
  auto grid = MeasureGrid::discrete(sub_pts, std::move(w));
  std::vector<double> values;
  values.reserve(keep.size() * b.n_paths);
  for (std::size_t k = 0; k < b.n_paths; ++k) {
    const auto row = b.path(k);
    for (auto i : keep) values.push_back(row[i]);
  }
  return PathBatch{b.n_paths, std::move(grid), std::move(values), b.seed};
}

PathSampler ou_path_sampler(const OUModel& m, std::vector<double> points) {
  return [m, points = std::move(points)](std::uint64_t seed, std::uint64_t index, std::span<double> out) {
    sample_ou_path(m, points, seed, index, out);
  };
}

namespace {

std::vector<double> fvalues(const PathBatch& b, const RealMap& f) {
  const auto pts = b.grid.points();
  std::vector<double> out(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = f(pts[i]);
  return out;
}

}  // namespace

std::vector<double> sup_deviation(const PathBatch& b, const RealMap& f) {
  if (b.n_paths == 0) throw InvalidParameter("sup_deviation: empty batch");
  const auto fv = fvalues(b, f);
  std::vector<double> out(b.n_paths);
  parallel_for(b.n_paths, [&](std::size_t k) {
    const auto row = b.path(k);
    double s = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) s = std::max(s, std::abs(row[i] - fv[i]));
    out[k] = s;
  });
  return out;
}

std::vector<double> averaged_deviation_stat(const PathBatch& b, const RealMap& f) {
  if (b.n_paths == 0) throw InvalidParameter("averaged_deviation_stat: empty batch");
  const auto fv = fvalues(b, f);
  const auto w = b.grid.weights();
  const double mu = b.grid.total_measure();
  std::vector<double> out(b.n_paths);
  parallel_for(b.n_paths, [&](std::size_t k) {
    const auto row = b.path(k);
    double avg = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) avg += w[i] * (row[i] - fv[i]);
    avg /= mu;
    double s = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) s = std::max(s, std::abs(row[i] - fv[i] - avg));
    out[k] = s;
  });
  return out;
}

bool TailReport::all_dominated() const {
  return std::all_of(dominated.begin(), dominated.end(), [](bool d) { return d; });
}

double wilson_halfwidth(double p_hat, std::size_t n, double z) {
  const double nn = static_cast<double>(n);
  const double z2 = z * z;
  return z / (1.0 + z2 / nn) * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn));
}

TailReport empirical_tail(std::span<const double> stats, const std::vector<double>& x_grid) {
  if (stats.empty()) throw InvalidParameter("empirical_tail: no samples");
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    if (!(x_grid[i] >= 0.0) || (i > 0 && !(x_grid[i] > x_grid[i - 1]))) {
      throw InvalidParameter("empirical_tail: x grid must be nonnegative and increasing");
    }
  }
  std::vector<double> sorted(stats.begin(), stats.end());
  std::sort(sorted.begin(), sorted.end());
  TailReport r;
  r.x_grid = x_grid;
  r.n_paths = sorted.size();
  for (double x : x_grid) {
    const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
    const double p = static_cast<double>(above) / static_cast<double>(sorted.size());
    r.empirical.push_back(p);
    r.ci_halfwidth.push_back(wilson_halfwidth(p, sorted.size()));
  }
  return r;
}

TailReport empirical_sup_tail(const PathBatch& b, const RealMap& f, const std::vector<double>& x_grid) {
  return empirical_tail(sup_deviation(b, f), x_grid);
}

void attach_bound(TailReport& r, const std::function<BoundResult(double)>& bound_fn) {
  const double n = static_cast<double>(r.n_paths);
  r.bound_raw.clear();
  r.bound_clamped.clear();
  r.alpha_star.clear();
  r.p_star.clear();
  r.dominated.clear();
  for (std::size_t i = 0; i < r.x_grid.size(); ++i) {
    const BoundResult b = bound_fn(r.x_grid[i]);
    r.bound_raw.push_back(b.raw);
    r.bound_clamped.push_back(b.clamped);
    r.alpha_star.push_back(b.alpha_star);
    r.p_star.push_back(b.p_star);
    const double p = r.empirical[i];
    const bool checked = b.clamped < 1.0;
    r.dominated.push_back(!checked || b.raw >= p - 3.0 * std::sqrt(p * (1.0 - p) / n));
  }
}

TailReport domination_report(const PathBatch& b, const RealMap& f,
                             const std::function<BoundResult(double)>& bound_fn,
                             const std::vector<double>& x_grid) {
  TailReport r = empirical_sup_tail(b, f, x_grid);
  attach_bound(r, bound_fn);
  return r;
}

}  // namespace orlicz
