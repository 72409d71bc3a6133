#pragma once

#include <span>
#include <vector>

namespace orlicz {

/// Discretised parameter set S inside the interval [lo, hi] with the metric
/// |u - v|. A Lebesgue grid stands for the continuous measure on [lo, hi]:
/// its points are cell midpoints with equal weights, and ball measures are
/// exact interval lengths. A discrete grid is a finite measure space whose
/// ball measures are sums of point weights.
class MeasureGrid {
 public:
  enum class Kind { kLebesgue, kDiscrete };

  /// n uniform cells of [lo, hi]; weight (hi - lo) / n at each midpoint.
  static MeasureGrid lebesgue(double lo, double hi, int n);
  /// Finite measure space with strictly increasing points and positive weights.
  static MeasureGrid discrete(std::vector<double> points, std::vector<double> weights);
  /// Trapezoid weights on n equispaced nodes including both ends of [lo, hi].
  static MeasureGrid trapezoid(double lo, double hi, int n);

  Kind kind() const { return kind_; }
  bool is_lebesgue() const { return kind_ == Kind::kLebesgue; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  double total_measure() const { return total_; }
  std::size_t size() const { return points_.size(); }
  double min_weight() const;

  /// mu([t - r, t + r] intersected with S).
  double ball_measure(double t, double r) const;

  /// Largest distance from t to the set.
  double radius_from(double t) const;

  /// Points used for sup over t in S: the grid points, plus lo, hi and the
  /// midpoint for Lebesgue grids. Sorted, duplicates removed.
  std::vector<double> sup_points() const;

  /// Copy with every weight multiplied by lambda > 0.
  MeasureGrid scaled(double lambda) const;

 private:
  MeasureGrid(Kind kind, double lo, double hi, std::vector<double> points,
              std::vector<double> weights, double total);

  Kind kind_;
  double lo_;
  double hi_;
  std::vector<double> points_;
  std::vector<double> weights_;
  double total_;
  double density_ = 1.0;  // Lebesgue only: measure = density * length
};

}  // namespace orlicz
