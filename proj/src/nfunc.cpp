#include "orlicz/nfunc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "orlicz/error.hpp"
#include "orlicz/numerics.hpp"

namespace orlicz {

NFunction::NFunction(std::string name, RealMap evaluator, double eval_domain_cap)
    : name_(std::move(name)), eval_(std::move(evaluator)), cap_(eval_domain_cap) {
  if (!eval_) throw InvalidParameter("NFunction: evaluator is empty");
  if (!(cap_ > 0.0)) throw InvalidParameter("NFunction: eval_domain_cap must be positive");
}

double NFunction::operator()(double x) const {
  const double ax = std::abs(x);
  if (ax > cap_) {
    std::ostringstream msg;
    msg << name_ << ": argument " << ax << " exceeds evaluation cap " << cap_;
    throw DomainOverflow(msg.str());
  }
  return eval_(ax);
}

NFunction& NFunction::with_inverse(RealMap inverse) {
  inverse_hint_ = std::move(inverse);
  return *this;
}
NFunction& NFunction::with_conjugate(RealMap conjugate) {
  conjugate_hint_ = std::move(conjugate);
  return *this;
}
NFunction& NFunction::with_delta2(Delta2Info info) {
  delta2_ = std::move(info);
  return *this;
}
NFunction& NFunction::with_class_e(ClassEInfo info) {
  class_e_ = info;
  return *this;
}

namespace {

constexpr double kPowerValueCap = 1e300;

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

NFunction build(const catalog::Power& e) {
  require(e.c > 0.0 && std::isfinite(e.c), "power: c must be positive");
  require(e.p > 1.0 && std::isfinite(e.p), "power: p must exceed 1");
  const double c = e.c;
  const double p = e.p;
  const double q = p / (p - 1.0);
  const double cap = std::pow(kPowerValueCap / std::max(c, 1.0), 1.0 / p);
  NFunction u("power(c=" + fmt(c) + ",p=" + fmt(p) + ")",
              [c, p](double x) { return c * std::pow(x, p); }, cap);
  u.with_inverse([c, p](double y) { return std::pow(y / c, 1.0 / p); })
      .with_conjugate([c, p, q](double y) {
        const double ay = std::abs(y);
        return (p - 1.0) / p * std::pow(ay, q) * std::pow(c * p, -1.0 / (p - 1.0));
      })
      .with_delta2({0.0, [p](double z) { return std::pow(z, p); }})
      .with_class_e({0.0, c, 1.0});
  return u;
}

NFunction build(const catalog::ExpLinear&) {
  NFunction u("exp_linear", [](double x) { return std::expm1(x) - x; }, kExpArgumentCap);
  u.with_conjugate([](double y) {
    const double ay = std::abs(y);
    return (1.0 + ay) * std::log1p(ay) - ay;
  });
  return u;
}

NFunction build(const catalog::ExpPower& e) {
  require(e.a > 0.0 && std::isfinite(e.a), "exp_power: a must be positive");
  require(e.b > 1.0 && std::isfinite(e.b), "exp_power: b must exceed 1");
  const double a = e.a;
  const double b = e.b;
  NFunction u("exp_power(a=" + fmt(a) + ",b=" + fmt(b) + ")",
              [a, b](double x) { return std::expm1(a * std::pow(x, b)); },
              std::pow(kExpArgumentCap / a, 1.0 / b));
  u.with_inverse([a, b](double y) { return std::pow(std::log1p(y) / a, 1.0 / b); });
  return u;
}

NFunction build(const catalog::PowerOverP& e) {
  require(e.p > 1.0 && std::isfinite(e.p), "power_over_p: p must exceed 1");
  const double p = e.p;
  const double q = p / (p - 1.0);
  NFunction u("power_over_p(p=" + fmt(p) + ")", [p](double x) { return std::pow(x, p) / p; },
              std::pow(kPowerValueCap, 1.0 / p));
  u.with_inverse([p](double y) { return std::pow(p * y, 1.0 / p); })
      .with_conjugate([q](double y) { return std::pow(std::abs(y), q) / q; })
      .with_delta2({0.0, [p](double z) { return std::pow(z, p); }})
      .with_class_e({0.0, 1.0 / p, 1.0});
  return u;
}

NFunction build(const catalog::PiecewiseExp& e) {
  require(e.alpha > 0.0 && e.alpha < 1.0, "piecewise_exp: alpha must lie in (0, 1)");
  const double alpha = e.alpha;
  const double knot = std::pow(2.0 / alpha, 1.0 / alpha);
  const double coef = std::pow(std::numbers::e * alpha / 2.0, 2.0 / alpha);
  const double knot_value = std::exp(2.0 / alpha);
  NFunction u("piecewise_exp(alpha=" + fmt(alpha) + ")",
              [=](double x) { return x <= knot ? coef * x * x : std::exp(std::pow(x, alpha)); },
              std::pow(kExpArgumentCap, 1.0 / alpha));
  u.with_inverse([=](double y) {
    return y <= knot_value ? std::sqrt(y / coef) : std::pow(std::log(y), 1.0 / alpha);
  });
  return u;
}

// Slope of fn at y by central differences, one-sided near the cap.
double slope(const RealMap& fn, double y, double cap) {
  const double h = 1e-6 * std::max(y, 1.0);
  if (y + h <= cap) {
    const double lo = std::max(y - h, 0.0);
    return (fn(y + h) - fn(lo)) / (y + h - lo);
  }
  return (fn(y) - fn(y - h)) / h;
}

numerics::Extremum argmax_affine_minus(const RealMap& fn, double cap, double x, const std::string& label) {
  x = std::abs(x);
  if (x == 0.0) return {0.0, 0.0};
  double hi = std::min(1.0, cap);
  while (slope(fn, hi, cap) < x) {
    if (hi >= cap) {
      throw DomainOverflow(label + ": conjugate supremum not attained below cap " + fmt(cap));
    }
    hi = std::min(2.0 * hi, cap);
  }
  auto objective = [&](double y) { return x * y - fn(y); };
  auto best = numerics::golden_section_max(objective, 0.0, hi, 1e-12 * std::max(hi, 1.0));
  if (best.value < 0.0) best = {0.0, 0.0};
  return best;
}

double sup_affine_minus(const RealMap& fn, double cap, double x, const std::string& label) {
  return argmax_affine_minus(fn, cap, x, label).value;
}

}  // namespace

NFunction make_catalog_function(const CatalogEntry& entry) {
  return std::visit([](const auto& e) { return build(e); }, entry);
}

std::vector<NFunction> catalog_samples() {
  return {make_catalog_function(catalog::Power{1.0, 2.0}),
          make_catalog_function(catalog::ExpLinear{}),
          make_catalog_function(catalog::ExpPower{1.0, 2.0}),
          make_catalog_function(catalog::PowerOverP{3.0}),
          make_catalog_function(catalog::PiecewiseExp{0.5})};
}

double generalized_inverse(const NFunction& U, double y) {
  if (!(y >= 0.0) || !std::isfinite(y)) {
    throw InvalidParameter("generalized_inverse: y must be finite and nonnegative");
  }
  if (y == 0.0) return 0.0;
  const double cap = U.eval_domain_cap();
  if (const auto& hint = U.inverse_hint()) {
    const double x = (*hint)(y);
    if (!(x <= cap)) {
      throw DomainOverflow(U.name() + ": inverse of " + fmt(y) + " lies beyond the evaluation cap");
    }
    return x;
  }
  if (y > U(cap)) {
    throw DomainOverflow(U.name() + ": " + fmt(y) + " exceeds U(cap)");
  }
  double hi = std::min(1.0, cap);
  while (U(hi) < y) hi = std::min(2.0 * hi, cap);
  while (hi > 1e-300 && U(0.5 * hi) >= y) hi *= 0.5;
  const double lo = 0.5 * hi;
  return numerics::bisect([&](double x) { return U(x) - y; }, lo, hi);
}

double conjugate(const NFunction& U, double x) {
  const RealMap fn = [&U](double y) { return U(y); };
  return sup_affine_minus(fn, U.eval_domain_cap(), x, U.name());
}

double conjugate_argmax(const NFunction& U, double x) {
  const RealMap fn = [&U](double y) { return U(y); };
  return argmax_affine_minus(fn, U.eval_domain_cap(), x, U.name()).x;
}

double conjugate_of(const RealMap& fn, double cap, double x) {
  return sup_affine_minus(fn, cap, x, "conjugate");
}

double biconjugate_residual(const NFunction& U, std::span<const double> grid) {
  const double cap = U.eval_domain_cap();
  // U*'s argument range that keeps its maximiser inside [0, cap].
  const double star_cap = slope([&U](double y) { return U(y); }, cap, cap);
  const RealMap star = [&U](double y) { return conjugate(U, y); };
  double worst = 0.0;
  for (const double x : grid) {
    const double bi = conjugate_of(star, star_cap, x);
    worst = std::max(worst, std::abs(bi - U(x)));
  }
  return worst;
}

std::vector<std::string> check_invariants(const NFunction& U, double x_max) {
  std::vector<std::string> bad;
  x_max = std::min(x_max, U.eval_domain_cap());
  auto note = [&](const std::string& what, double a, double b = std::nan("")) {
    std::ostringstream os;
    os << U.name() << ": " << what << " at " << a;
    if (!std::isnan(b)) os << ", " << b;
    bad.push_back(os.str());
  };
  if (U(0.0) != 0.0) note("U(0) != 0", 0.0);

  std::vector<double> xs;
  const int n = 60;
  for (int i = 0; i < n; ++i) {
    xs.push_back(x_max * std::pow(10.0, -4.0 + 4.0 * i / (n - 1)));
  }
  constexpr double rel = 1e-12;
  for (double x : xs) {
    if (std::abs(U(x) - U(-x)) > rel * U(x)) note("not even", x);
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(U(xs[i]) > U(xs[i - 1]))) note("not strictly increasing", xs[i - 1], xs[i]);
    if (U(xs[i]) / xs[i] < U(xs[i - 1]) / xs[i - 1] * (1.0 - rel)) {
      note("U(x)/x not increasing", xs[i - 1], xs[i]);
    }
  }
  std::vector<double> sym;
  for (int i = 0; i <= 24; ++i) sym.push_back(-x_max + 2.0 * x_max * i / 24.0);
  for (double a : sym) {
    for (double b : sym) {
      const double lhs = U(0.5 * (a + b));
      const double rhs = 0.5 * (U(a) + U(b));
      if (lhs > rhs * (1.0 + rel) + 1e-300) note("midpoint convexity fails", a, b);
    }
  }
  if (const auto& d2 = U.delta2()) {
    for (double z : {1.0, 1.5, 2.0, 4.0, 10.0}) {
      for (double x : xs) {
        if (x < d2->x0 || z * x > U.eval_domain_cap()) continue;
        if (U(z * x) > d2->K(z) * U(x) * (1.0 + rel)) note("Delta2 bound fails (z, x)", z, x);
      }
    }
  }
  if (const auto& e = U.class_e()) {
    for (double x : xs) {
      for (double y : xs) {
        if (x < e->z0 || y < e->z0) continue;
        const double arg = e->D * x * y;
        if (arg > U.eval_domain_cap()) continue;
        if (U(x) * U(y) > e->B * U(arg) * (1.0 + rel)) note("class E bound fails", x, y);
      }
    }
  }
  return bad;
}

}  // namespace orlicz
