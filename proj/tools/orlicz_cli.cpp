// orlicz: command-line front end.
//
//   orlicz nfunc    --name NAME [--c --p --a --b --alpha] --x X
//   orlicz norm     --name NAME [params] (--values V1,V2,... | --input FILE)
//   orlicz bound    --config FILE [--out FILE]
//   orlicz simulate --config FILE [--out FILE] [--json FILE]
//   orlicz report   --config FILE [--out FILE]
//
// Exit status: 0 success, 2 usage or configuration error, 3 a mathematical
// hypothesis of the bound fails (divergent integral, drift modulus violated).

#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "orlicz/config.hpp"
#include "orlicz/error.hpp"
#include "orlicz/mc_lab.hpp"
#include "orlicz/nfunc.hpp"
#include "orlicz/orlicz_norms.hpp"
#include "orlicz/ou_model.hpp"

namespace {

using namespace orlicz;

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kHypothesis = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HypothesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw UsageError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw UsageError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_atomic(path, content);
  }
}

struct NFuncArgs {
  std::string name;
  std::optional<double> c, p, a, b, alpha;
};

void add_nfunc_options(CLI::App* cmd, NFuncArgs& args) {
  cmd->add_option("--name", args.name, "power | exp_linear | exp_power | power_over_p | piecewise_exp")
      ->required();
  cmd->add_option("--c", args.c, "power: coefficient");
  cmd->add_option("--p", args.p, "power, power_over_p: exponent");
  cmd->add_option("--a", args.a, "exp_power: a");
  cmd->add_option("--b", args.b, "exp_power: b");
  cmd->add_option("--alpha", args.alpha, "piecewise_exp: alpha");
}

double need(const std::optional<double>& v, const std::string& flag, const std::string& name) {
  if (!v) throw UsageError(name + " requires --" + flag);
  return *v;
}

NFunction build_nfunc(const NFuncArgs& a) {
  if (a.name == "power") return make_catalog_function(catalog::Power{need(a.c, "c", a.name), need(a.p, "p", a.name)});
  if (a.name == "exp_linear") return make_catalog_function(catalog::ExpLinear{});
  if (a.name == "exp_power") {
    return make_catalog_function(catalog::ExpPower{need(a.a, "a", a.name), need(a.b, "b", a.name)});
  }
  if (a.name == "power_over_p") return make_catalog_function(catalog::PowerOverP{need(a.p, "p", a.name)});
  if (a.name == "piecewise_exp") {
    return make_catalog_function(catalog::PiecewiseExp{need(a.alpha, "alpha", a.name)});
  }
  throw UsageError("unknown N-function name '" + a.name + "'");
}

int cmd_nfunc(const NFuncArgs& args, double x) {
  const NFunction U = build_nfunc(args);
  std::ostringstream out;
  out << "U=" << fmt17(U(x)) << "\n";
  out << "Uinv=" << fmt17(x >= 0.0 ? generalized_inverse(U, x) : std::nan("")) << "\n";
  out << "Ustar=" << fmt17(conjugate(U, x)) << "\n";
  std::cout << out.str();
  return kOk;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t\r\n");
    const std::string tok = item.substr(b, e - b + 1);
    double v = 0.0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
      throw UsageError("not a number: '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

int cmd_norm(const NFuncArgs& args, const std::string& values, const std::string& input) {
  if (values.empty() == input.empty()) throw UsageError("norm needs exactly one of --values or --input");
  const NFunction U = build_nfunc(args);
  std::string text = values;
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw UsageError("cannot read " + input);
    std::ostringstream buf;
    for (std::string line; std::getline(in, line);) buf << line << ',';
    text = buf.str();
  }
  SampleSet xs{parse_values(text), 0};
  if (xs.values.empty()) throw UsageError("no sample values given");
  const auto est = luxembourg_norm_samples_with_error(U, xs);
  std::cout << "n=" << xs.values.size() << "\nnorm=" << fmt17(est.value)
            << "\nstd_error=" << fmt17(est.std_error) << "\n";
  return kOk;
}

RunConfig read_config(const std::string& path) {
  RunConfig cfg = load_config(path);
  const auto bad = check_drift(cfg);
  if (!bad.empty()) {
    throw HypothesisError("drift modulus hypothesis fails (|f(u)-f(v)| <= delta(d) <= d): " + bad.front());
  }
  return cfg;
}

Theorem4Fit fit_bound(const RunConfig& cfg) {
  try {
    return theorem4_fit_optimized(cfg.model, cfg.f.integral(cfg.model.T), cfg.f.delta,
                                  cfg.theorem4_options());
  } catch (const DivergentIntegral& e) {
    throw HypothesisError(std::string("bound hypothesis fails (Delta_q finite and D_{p,q} convergent): ") +
                          e.what());
  }
}

std::string bound_csv(const RunConfig& cfg, const Theorem4Fit& fit) {
  std::ostringstream out;
  out << "x,bound_raw,bound_clamped,alpha_star,p_star,gamma_q,delta_q,d_pq\n";
  for (double x : cfg.x_grid.values()) {
    const auto b = theorem4_apply(fit, x);
    out << fmt17(x) << ',' << fmt17(b.raw) << ',' << fmt17(b.clamped) << ',' << fmt17(b.alpha_star)
        << ',' << fmt17(b.p_star) << ',' << fmt17(fit.gamma2) << ',' << fmt17(fit.delta2) << ','
        << fmt17(fit.d_p2) << '\n';
  }
  return out.str();
}

int cmd_bound(const std::string& config, const std::string& out_path) {
  const RunConfig cfg = read_config(config);
  const auto fit = fit_bound(cfg);
  emit(out_path.empty() ? cfg.output.csv : out_path, bound_csv(cfg, fit));
  return kOk;
}

struct Simulation {
  TailReport report;
  TailReport half_grid;
  Theorem4Fit fit;
  double runtime_ms = 0.0;
};

Simulation run_simulation(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Simulation s;
  s.fit = fit_bound(cfg);
  const auto batch = sample_ou_batch(cfg.model, cfg.mc.grid_points, cfg.mc.paths, cfg.mc.seed);
  const double T = cfg.model.T;
  const RealMap f = [&cfg, T](double t) { return cfg.f(t, T); };
  const auto xs = cfg.x_grid.values();
  const auto bound_fn = [&s](double x) { return theorem4_apply(s.fit, x); };
  s.report = domination_report(batch, f, bound_fn, xs);
  if (cfg.mc.grid_points >= 3) {
    s.half_grid = empirical_sup_tail(subsample(batch, 2), f, xs);
  }
  s.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return s;
}

std::string simulate_csv(const TailReport& r) {
  std::ostringstream out;
  out << "x,empirical,ci_halfwidth,bound_raw,bound_clamped,dominated\n";
  for (std::size_t i = 0; i < r.x_grid.size(); ++i) {
    out << fmt17(r.x_grid[i]) << ',' << fmt17(r.empirical[i]) << ',' << fmt17(r.ci_halfwidth[i]) << ','
        << fmt17(r.bound_raw[i]) << ',' << fmt17(r.bound_clamped[i]) << ','
        << (r.dominated[i] ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string simulate_json(const RunConfig& cfg, const Simulation& s) {
  nlohmann::ordered_json j;
  j["n_paths"] = cfg.mc.paths;
  j["seed"] = cfg.mc.seed;
  j["all_dominated"] = s.report.all_dominated();
  j["runtime_ms"] = std::llround(s.runtime_ms);
  j["grid_points"] = cfg.mc.grid_points;
  j["alpha_star"] = s.fit.alpha_star;
  j["p_star"] = s.fit.p_star;
  j["bound_constant"] = s.fit.constant;
  j["half_grid_empirical"] = s.half_grid.empirical;
  return j.dump(2) + "\n";
}

int cmd_simulate(const std::string& config, const std::string& out_path, const std::string& json_path) {
  const RunConfig cfg = read_config(config);
  const Simulation s = run_simulation(cfg);
  emit(out_path.empty() ? cfg.output.csv : out_path, simulate_csv(s.report));
  const std::string jp = json_path.empty() ? cfg.output.json : json_path;
  const std::string summary = simulate_json(cfg, s);
  if (jp.empty()) {
    std::cerr << summary;
  } else {
    write_atomic(jp, summary);
  }
  return kOk;
}

int cmd_report(const std::string& config, const std::string& out_path) {
  const RunConfig cfg = read_config(config);
  const Simulation s = run_simulation(cfg);
  const auto& r = s.report;
  std::ostringstream out;
  char line[256];
  out << "OU tau=" << fmt17(cfg.model.tau) << " T=" << fmt17(cfg.model.T) << " beta1=" << fmt17(cfg.model.beta1)
      << " beta2=" << fmt17(cfg.model.beta2) << "\n";
  out << "alpha*=" << fmt17(s.fit.alpha_star) << " p*=" << fmt17(s.fit.p_star) << " Gamma_2=" << fmt17(s.fit.gamma2)
      << " Delta_2=" << fmt17(s.fit.delta2) << " D_p2=" << fmt17(s.fit.d_p2) << "\n";
  out << "paths=" << cfg.mc.paths << " grid=" << cfg.mc.grid_points << " seed=" << cfg.mc.seed << "\n\n";
  std::snprintf(line, sizeof line, "%12s %12s %12s %12s %14s %10s\n", "x", "empirical", "ci99", "half_grid",
                "bound", "dominated");
  out << line;
  for (std::size_t i = 0; i < r.x_grid.size(); ++i) {
    const double half = s.half_grid.empirical.empty() ? std::nan("") : s.half_grid.empirical[i];
    std::snprintf(line, sizeof line, "%12.6g %12.6g %12.6g %12.6g %14.6g %10s\n", r.x_grid[i], r.empirical[i],
                  r.ci_halfwidth[i], half, r.bound_clamped[i], r.dominated[i] ? "yes" : "NO");
    out << line;
  }
  out << "\nall dominated: " << (r.all_dominated() ? "yes" : "no") << "\n";
  emit(out_path, out.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orlicz-space supremum bounds and Monte Carlo checks"};
  app.set_help_flag("--help", "Print help and exit");
  app.require_subcommand(1);

  NFuncArgs nf_args;
  double nf_x = 0.0;
  auto* nfunc = app.add_subcommand("nfunc", "Evaluate U, U^{-1} and U* of a catalog N-function");
  nfunc->set_help_flag("--help");
  add_nfunc_options(nfunc, nf_args);
  nfunc->add_option("--x", nf_x, "Argument")->required();

  NFuncArgs norm_args;
  std::string norm_values;
  std::string norm_input;
  auto* norm = app.add_subcommand("norm", "Luxembourg norm of samples");
  norm->set_help_flag("--help");
  add_nfunc_options(norm, norm_args);
  norm->add_option("--values", norm_values, "Comma-separated samples");
  norm->add_option("--input", norm_input, "File with samples, one per line or comma-separated");

  std::string config;
  std::string out_path;
  std::string json_path;
  auto* bound = app.add_subcommand("bound", "Tail bound on the configured x grid (CSV)");
  bound->set_help_flag("--help");
  bound->add_option("--config", config, "Run configuration (JSON)")->required();
  bound->add_option("--out", out_path, "CSV path; overrides output.csv");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo tail versus bound (CSV + JSON summary)");
  simulate->set_help_flag("--help");
  simulate->add_option("--config", config, "Run configuration (JSON)")->required();
  simulate->add_option("--out", out_path, "CSV path; overrides output.csv");
  simulate->add_option("--json", json_path, "Summary path; overrides output.json");

  auto* report = app.add_subcommand("report", "Readable domination table with a half-grid column");
  report->set_help_flag("--help");
  report->add_option("--config", config, "Run configuration (JSON)")->required();
  report->add_option("--out", out_path, "Text output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*nfunc) return cmd_nfunc(nf_args, nf_x);
    if (*norm) return cmd_norm(norm_args, norm_values, norm_input);
    if (*bound) return cmd_bound(config, out_path);
    if (*simulate) return cmd_simulate(config, out_path, json_path);
    if (*report) return cmd_report(config, out_path);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return kUsage;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return kHypothesis;
  } catch (const DivergentIntegral& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return kHypothesis;
  } catch (const orlicz::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
