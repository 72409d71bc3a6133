#include "orlicz/measure_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "orlicz/error.hpp"

namespace orlicz {

MeasureGrid::MeasureGrid(Kind kind, double lo, double hi, std::vector<double> points,
                         std::vector<double> weights, double total)
    : kind_(kind),
      lo_(lo),
      hi_(hi),
      points_(std::move(points)),
      weights_(std::move(weights)),
      total_(total) {
  if (points_.empty() || points_.size() != weights_.size()) {
    throw InvalidParameter("MeasureGrid: points and weights must be nonempty and equally long");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw InvalidParameter("MeasureGrid: weights must be positive");
    }
    if (i > 0 && !(points_[i] > points_[i - 1])) {
      throw InvalidParameter("MeasureGrid: points must be strictly increasing");
    }
  }
  if (!(total_ > 0.0)) throw InvalidParameter("MeasureGrid: total measure must be positive");
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(sum - total_) > 1e-12 * total_) {
    throw InvalidParameter("MeasureGrid: weights do not sum to the total measure");
  }
}

MeasureGrid MeasureGrid::lebesgue(double lo, double hi, int n) {
  if (!(hi > lo) || n < 1) throw InvalidParameter("MeasureGrid::lebesgue: need hi > lo and n >= 1");
  const double h = (hi - lo) / n;
  std::vector<double> pts(n);
  std::vector<double> w(n, h);
  for (int i = 0; i < n; ++i) pts[i] = lo + (i + 0.5) * h;
  // The continuous measure is exact; rescale the last weight so the
  // discrete sum reproduces it to rounding.
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  w.back() += (hi - lo) - sum;
  return MeasureGrid(Kind::kLebesgue, lo, hi, std::move(pts), std::move(w), hi - lo);
}

MeasureGrid MeasureGrid::discrete(std::vector<double> points, std::vector<double> weights) {
  if (points.empty()) throw InvalidParameter("MeasureGrid::discrete: no points");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double lo = points.front();
  const double hi = points.back();
  return MeasureGrid(Kind::kDiscrete, lo, hi, std::move(points), std::move(weights), total);
}

MeasureGrid MeasureGrid::trapezoid(double lo, double hi, int n) {
  if (!(hi > lo) || n < 2) throw InvalidParameter("MeasureGrid::trapezoid: need hi > lo and n >= 2");
  const double h = (hi - lo) / (n - 1);
  std::vector<double> pts(n);
  std::vector<double> w(n, h);
  for (int i = 0; i < n; ++i) pts[i] = lo + i * h;
  pts.back() = hi;
  w.front() = w.back() = 0.5 * h;
  return discrete(std::move(pts), std::move(w));
}

double MeasureGrid::min_weight() const { return *std::min_element(weights_.begin(), weights_.end()); }

double MeasureGrid::ball_measure(double t, double r) const {
  if (r < 0.0) return 0.0;
  if (kind_ == Kind::kLebesgue) {
    return density_ * std::max(0.0, std::min(hi_, t + r) - std::max(lo_, t - r));
  }
  const auto first = std::lower_bound(points_.begin(), points_.end(), t - r);
  const auto last = std::upper_bound(points_.begin(), points_.end(), t + r);
  double m = 0.0;
  for (auto it = first; it != last; ++it) m += weights_[static_cast<std::size_t>(it - points_.begin())];
  return m;
}

double MeasureGrid::radius_from(double t) const { return std::max(t - lo_, hi_ - t); }

std::vector<double> MeasureGrid::sup_points() const {
  std::vector<double> out(points_.begin(), points_.end());
  if (kind_ == Kind::kLebesgue) {
    out.push_back(lo_);
    out.push_back(hi_);
    out.push_back(0.5 * (lo_ + hi_));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MeasureGrid MeasureGrid::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw InvalidParameter("MeasureGrid::scaled: lambda must be positive");
  std::vector<double> w(weights_);
  for (auto& x : w) x *= lambda;
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (kind_ == Kind::kLebesgue) {
    // Scaling a Lebesgue measure leaves the continuous structure; treat it as
    // the same interval with density lambda.
    MeasureGrid g(kind_, lo_, hi_, points_, std::move(w), total);
    g.density_ = lambda * density_;
    return g;
  }
  return MeasureGrid(kind_, lo_, hi_, points_, std::move(w), total);
}

}  // namespace orlicz
