#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace orlicz {

using RealMap = std::function<double(double)>;

/// Growth bound U(z x) <= K(z) U(x) for z >= 1, x >= x0.
struct Delta2Info {
  double x0 = 0.0;
  RealMap K;
};

/// Submultiplicativity bound U(x) U(y) <= B U(D x y) for x, y >= z0.
struct ClassEInfo {
  double z0 = 0.0;
  double B = 1.0;
  double D = 1.0;
};

/// An Orlicz N-function: even, convex, U(0) = 0, U(x)/x -> 0 at 0 and
/// -> infinity at infinity. The evaluator is called only on |x| <= cap;
/// larger arguments raise DomainOverflow instead of returning inf.
class NFunction {
 public:
  NFunction(std::string name, RealMap evaluator, double eval_domain_cap);

  /// U(x). Throws DomainOverflow when |x| exceeds the domain cap.
  double operator()(double x) const;

  const std::string& name() const { return name_; }
  double eval_domain_cap() const { return cap_; }

  const std::optional<RealMap>& inverse_hint() const { return inverse_hint_; }
  const std::optional<RealMap>& conjugate_hint() const { return conjugate_hint_; }
  const std::optional<Delta2Info>& delta2() const { return delta2_; }
  const std::optional<ClassEInfo>& class_e() const { return class_e_; }

  NFunction& with_inverse(RealMap inverse);
  NFunction& with_conjugate(RealMap conjugate);
  NFunction& with_delta2(Delta2Info info);
  NFunction& with_class_e(ClassEInfo info);

 private:
  std::string name_;
  RealMap eval_;
  double cap_;
  std::optional<RealMap> inverse_hint_;
  std::optional<RealMap> conjugate_hint_;
  std::optional<Delta2Info> delta2_;
  std::optional<ClassEInfo> class_e_;
};

namespace catalog {

/// c |x|^p, c > 0, p > 1.
struct Power {
  double c = 1.0;
  double p = 2.0;
};
/// e^{|x|} - |x| - 1.
struct ExpLinear {};
/// exp(a |x|^b) - 1, a > 0, b > 1.
struct ExpPower {
  double a = 1.0;
  double b = 2.0;
};
/// |x|^p / p, p > 1.
struct PowerOverP {
  double p = 2.0;
};
/// (e alpha / 2)^{2/alpha} x^2 below (2/alpha)^{1/alpha}, exp(|x|^alpha) above; 0 < alpha < 1.
struct PiecewiseExp {
  double alpha = 0.5;
};

}  // namespace catalog

using CatalogEntry = std::variant<catalog::Power, catalog::ExpLinear, catalog::ExpPower,
                                  catalog::PowerOverP, catalog::PiecewiseExp>;

/// Builds one of the standard N-functions with its metadata.
NFunction make_catalog_function(const CatalogEntry& entry);

/// Every catalog function with representative parameters.
std::vector<NFunction> catalog_samples();

/// Largest argument whose exp() is still comfortably finite.
inline constexpr double kExpArgumentCap = 700.0;

/// x >= 0 with U(x) = y. Uses the closed-form inverse when the function
/// carries one, otherwise brackets by doubling and bisects to relative 1e-10.
double generalized_inverse(const NFunction& U, double y);

/// Young-Fenchel transform U*(x) = sup_y (x y - U(y)).
double conjugate(const NFunction& U, double x);

/// The y >= 0 attaining the supremum in U*(|x|).
double conjugate_argmax(const NFunction& U, double x);

/// Conjugate of an arbitrary even convex map evaluated on [0, cap]; used for
/// the second transform in biconjugate checks.
double conjugate_of(const RealMap& fn, double cap, double x);

/// max over grid of |U**(x) - U(x)|.
double biconjugate_residual(const NFunction& U, std::span<const double> grid);

/// Sampled N-function checks: zero at origin, evenness, midpoint convexity,
/// strict increase, monotone U(x)/x, and the Delta2 / class E inequalities
/// when metadata is present. Returns human-readable violations.
std::vector<std::string> check_invariants(const NFunction& U, double x_max);

}  // namespace orlicz
