#include "orlicz/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace orlicz {

using nlohmann::json;

ConfigError::ConfigError(std::string path, const std::string& what)
    : Error((path.empty() ? std::string("/") : path) + ": " + what), path_(std::move(path)) {}

double DriftSpec::operator()(double t, double T) const {
  if (type == "zero" || values.empty()) return 0.0;
  if (values.size() == 1) return values[0];
  const double pos = std::clamp(t / T, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), values.size() - 2);
  const double frac = pos - static_cast<double>(i);
  return values[i] + frac * (values[i + 1] - values[i]);
}

double DriftSpec::integral(double T) const {
  if (type == "zero" || values.empty()) return 0.0;
  if (values.size() == 1) return values[0] * T;
  const double h = T / static_cast<double>(values.size() - 1);
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
  return s * h;
}

std::vector<double> XGridSpec::values() const {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    out[i] = log_spacing ? min * std::pow(max / min, s) : min + (max - min) * s;
  }
  if (count > 1) out.back() = max;
  return out;
}

Theorem4Options RunConfig::theorem4_options() const {
  Theorem4Options o;
  o.quad_tol = quad_tol;
  o.t_grid_points = t_grid_points;
  o.alpha_steps = alpha_steps;
  o.optimize_alpha = alpha_auto;
  o.p_search.grid = p_grid;
  return o;
}

namespace {

class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {}

  const json& object(const json& parent, const std::string& key, const std::string& base) const {
    const std::string path = base + "/" + key;
    if (!parent.contains(key)) throw ConfigError(path, "required field is missing");
    const json& v = parent.at(key);
    if (!v.is_object()) throw ConfigError(path, "expected an object");
    return v;
  }

  double number(const json& parent, const std::string& key, const std::string& base,
                std::optional<double> fallback, double lo, double hi, bool open_lo = false,
                bool open_hi = false) const {
    const std::string path = base + "/" + key;
    if (!parent.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(path, "required field is missing");
    }
    const json& v = parent.at(key);
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double x = v.get<double>();
    const bool below = open_lo ? !(x > lo) : !(x >= lo);
    const bool above = open_hi ? !(x < hi) : !(x <= hi);
    if (!std::isfinite(x) || below || above) {
      std::ostringstream os;
      os << "value " << x << " outside " << (open_lo ? "(" : "[") << lo << ", " << hi
         << (open_hi ? ")" : "]");
      throw ConfigError(path, os.str());
    }
    return x;
  }

  std::int64_t integer(const json& parent, const std::string& key, const std::string& base,
                       std::optional<std::int64_t> fallback, std::int64_t lo, std::int64_t hi) const {
    const std::string path = base + "/" + key;
    if (!parent.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(path, "required field is missing");
    }
    const json& v = parent.at(key);
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < lo || x > hi) {
      throw ConfigError(path, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    }
    return x;
  }

  std::string string(const json& parent, const std::string& key, const std::string& base,
                     std::optional<std::string> fallback, const std::set<std::string>& allowed) const {
    const std::string path = base + "/" + key;
    if (!parent.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(path, "required field is missing");
    }
    const json& v = parent.at(key);
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    auto s = v.get<std::string>();
    if (!allowed.empty() && !allowed.count(s)) {
      std::string opts;
      for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + ("\"" + a + "\"");
      throw ConfigError(path, "\"" + s + "\" is not one of " + opts);
    }
    return s;
  }

  void no_extra(const json& obj, const std::string& base, const std::set<std::string>& known) const {
    for (const auto& [k, v] : obj.items()) {
      if (!known.count(k)) throw ConfigError(base + "/" + k, "unknown field");
    }
  }

  const json& root() const { return root_; }

 private:
  const json& root_;
};

constexpr double kBig = std::numeric_limits<double>::max();

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "top level must be an object");
  Reader r(root);
  r.no_extra(root, "", {"process", "f", "zeta_alpha", "x_grid", "mc", "search", "quad_tol",
                        "t_grid_points", "output"});
  RunConfig cfg;

  const json& proc = r.object(root, "process", "");
  r.no_extra(proc, "/process", {"type", "tau", "T", "beta1", "beta2"});
  r.string(proc, "type", "/process", std::nullopt, {"ou"});
  cfg.model.tau = r.number(proc, "tau", "/process", std::nullopt, 0.0, kBig, true);
  cfg.model.T = r.number(proc, "T", "/process", std::nullopt, 0.0, kBig, true);
  cfg.model.beta1 = r.number(proc, "beta1", "/process", std::nullopt, 0.0, 1.0, true, true);
  cfg.model.beta2 = r.number(proc, "beta2", "/process", std::nullopt, 0.0, 1.0, true, true);
  if (!betas_admissible(cfg.model.beta1, cfg.model.beta2)) {
    std::ostringstream os;
    os.precision(10);
    os << "inadmissible betas: need 2/beta2 < 1/beta1 + 1, got 2/beta2 = " << 2.0 / cfg.model.beta2
       << " and 1/beta1 + 1 = " << 1.0 / cfg.model.beta1 + 1.0;
    throw ConfigError("/process", os.str());
  }
  const auto [alo, ahi] = alpha_interval(cfg.model.beta1, cfg.model.beta2);
  cfg.model.alpha_zeta = 0.5 * (alo + ahi);

  if (root.contains("f")) {
    const json& f = r.object(root, "f", "");
    r.no_extra(f, "/f", {"type", "c", "kappa", "values"});
    cfg.f.type = r.string(f, "type", "/f", std::nullopt, {"zero", "power-modulus"});
    if (cfg.f.type == "power-modulus") {
      cfg.f.delta.c = r.number(f, "c", "/f", std::nullopt, 0.0, kBig);
      cfg.f.delta.kappa = r.number(f, "kappa", "/f", std::nullopt, 0.0, kBig, true);
      if (!f.contains("values")) throw ConfigError("/f/values", "required field is missing");
      const json& vals = f.at("values");
      if (!vals.is_array() || vals.size() < 2) {
        throw ConfigError("/f/values", "expected an array of at least 2 numbers");
      }
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!vals[i].is_number() || !std::isfinite(vals[i].get<double>())) {
          throw ConfigError("/f/values/" + std::to_string(i), "expected a finite number");
        }
        cfg.f.values.push_back(vals[i].get<double>());
      }
    } else if (f.contains("c") || f.contains("kappa") || f.contains("values")) {
      throw ConfigError("/f/type", "\"zero\" takes no c, kappa or values");
    }
  }

  if (root.contains("zeta_alpha")) {
    const json& z = root.at("zeta_alpha");
    if (z.is_string()) {
      if (z.get<std::string>() != "auto") throw ConfigError("/zeta_alpha", "expected a number or \"auto\"");
    } else {
      cfg.model.alpha_zeta = r.number(root, "zeta_alpha", "", std::nullopt, alo, ahi, true, true);
      cfg.alpha_auto = false;
    }
  }

  if (root.contains("x_grid")) {
    const json& x = r.object(root, "x_grid", "");
    r.no_extra(x, "/x_grid", {"min", "max", "count", "spacing"});
    cfg.x_grid.min = r.number(x, "min", "/x_grid", cfg.x_grid.min, 0.0, kBig, true);
    cfg.x_grid.max = r.number(x, "max", "/x_grid", cfg.x_grid.max, 0.0, kBig, true);
    cfg.x_grid.count = static_cast<int>(r.integer(x, "count", "/x_grid", cfg.x_grid.count, 1, 100000));
    cfg.x_grid.log_spacing = r.string(x, "spacing", "/x_grid", "log", {"log", "linear"}) == "log";
    if (!(cfg.x_grid.max > cfg.x_grid.min) && cfg.x_grid.count > 1) {
      throw ConfigError("/x_grid/max", "must exceed /x_grid/min");
    }
  }

  if (root.contains("mc")) {
    const json& mc = r.object(root, "mc", "");
    r.no_extra(mc, "/mc", {"paths", "grid_points", "seed"});
    cfg.mc.paths = static_cast<std::uint64_t>(
        r.integer(mc, "paths", "/mc", static_cast<std::int64_t>(cfg.mc.paths), 1, 100000000));
    cfg.mc.grid_points = static_cast<int>(r.integer(mc, "grid_points", "/mc", cfg.mc.grid_points, 2, 1 << 22));
    cfg.mc.seed = static_cast<std::uint64_t>(
        r.integer(mc, "seed", "/mc", 1, 0, std::numeric_limits<std::int64_t>::max()));
  }

  if (root.contains("search")) {
    const json& s = r.object(root, "search", "");
    r.no_extra(s, "/search", {"p_grid", "alpha_steps"});
    cfg.p_grid = static_cast<int>(r.integer(s, "p_grid", "/search", cfg.p_grid, 1, 1000));
    cfg.alpha_steps = static_cast<int>(r.integer(s, "alpha_steps", "/search", cfg.alpha_steps, 1, 200));
  }

  cfg.quad_tol = r.number(root, "quad_tol", "", cfg.quad_tol, 1e-14, 1e-1);
  cfg.t_grid_points = static_cast<int>(r.integer(root, "t_grid_points", "", cfg.t_grid_points, 1, 100000));

  if (root.contains("output")) {
    const json& o = r.object(root, "output", "");
    r.no_extra(o, "/output", {"csv", "json"});
    cfg.output.csv = r.string(o, "csv", "/output", "", {});
    cfg.output.json = r.string(o, "json", "/output", "", {});
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<std::string> check_drift(const RunConfig& cfg) {
  std::vector<std::string> bad;
  if (cfg.f.type == "zero") return bad;
  const auto& v = cfg.f.values;
  const double T = cfg.model.T;
  const double h = T / static_cast<double>(v.size() - 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double d = increment_metric(cfg.model, i * h, j * h);
      const double dl = cfg.f.delta(d);
      if (std::abs(v[i] - v[j]) > dl * (1.0 + 1e-12) || dl > d * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "|f(u)-f(v)| <= delta(d(u,v)) <= d(u,v) fails at u=" << i * h << ", v=" << j * h;
        bad.push_back(os.str());
        if (bad.size() >= 5) return bad;
      }
    }
  }
  return bad;
}

}  // namespace orlicz
