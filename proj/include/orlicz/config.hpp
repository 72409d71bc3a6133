#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "orlicz/error.hpp"
#include "orlicz/nfunc.hpp"
#include "orlicz/ou_model.hpp"

namespace orlicz {

/// A run configuration that failed validation; `path()` is a JSON pointer
/// to the offending value.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct DriftSpec {
  std::string type = "zero";  // "zero" | "power-modulus"
  PowerModulus delta;
  std::vector<double> values;  // f at equispaced nodes of [0, T]

  /// Piecewise-linear interpolation of `values`; zero for type "zero".
  double operator()(double t, double T) const;
  /// int_0^T f by the trapezoid rule on the nodes.
  double integral(double T) const;
};

struct XGridSpec {
  double min = 0.5;
  double max = 5.0;
  int count = 20;
  bool log_spacing = true;

  std::vector<double> values() const;
};

struct McSpec {
  std::uint64_t paths = 10000;
  int grid_points = 512;
  std::uint64_t seed = 1;
};

struct OutputSpec {
  std::string csv;
  std::string json;
};

struct RunConfig {
  OUModel model;
  bool alpha_auto = true;
  DriftSpec f;
  XGridSpec x_grid;
  McSpec mc;
  int p_grid = 19;
  int alpha_steps = 40;
  double quad_tol = 1e-6;
  int t_grid_points = 65;
  OutputSpec output;

  Theorem4Options theorem4_options() const;
};

/// Parses and validates JSON text. Throws ConfigError.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::filesystem::path& file);

/// Checks |f(u) - f(v)| <= delta(d(u, v)) <= d(u, v) on pairs of drift nodes.
/// Returns the violations found.
std::vector<std::string> check_drift(const RunConfig& cfg);

}  // namespace orlicz
