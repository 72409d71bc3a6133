#include <doctest.h>

#include <string>

#include "orlicz/config.hpp"

using namespace orlicz;

namespace {

const char* kBase = R"({"process": {"type": "ou", "tau": 1.0, "T": 1.0, "beta1": 0.5, "beta2": 0.95}})";

std::string error_path(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

std::string with(const std::string& extra) {
  std::string s = kBase;
  s.pop_back();
  return s + ", " + extra + "}";
}

}  // namespace

TEST_CASE("minimal config takes defaults") {
  const auto c = parse_config(kBase);
  CHECK(c.alpha_auto);
  CHECK(c.model.alpha_zeta == doctest::Approx(0.5 * (2.0 / 0.95 + 3.0)));
  CHECK(c.f.type == "zero");
  CHECK(c.mc.paths == 10000);
  CHECK(c.mc.seed == 1);
  CHECK(c.x_grid.values().size() == 20);
  CHECK(c.output.csv.empty());
  const auto o = c.theorem4_options();
  CHECK(o.p_search.grid == 19);
  CHECK(o.optimize_alpha);
}

TEST_CASE("error paths") {
  CHECK(error_path("{") == "");
  CHECK(error_path("[]") == "");
  CHECK(error_path("{}") == "/process");
  CHECK(error_path(with(R"("x_grid": {"count": "twenty"})")) == "/x_grid/count");
  CHECK(error_path(with(R"("x_grid": {"min": 3, "max": 2})")) == "/x_grid/max");
  CHECK(error_path(with(R"("mc": {"paths": 0})")) == "/mc/paths");
  CHECK(error_path(with(R"("mc": {"paths": 10, "colour": 1})")) == "/mc/colour");
  CHECK(error_path(with(R"("zeta_alpha": 5.0)")) == "/zeta_alpha");
  CHECK(error_path(with(R"("zeta_alpha": "best")")) == "/zeta_alpha");
  CHECK(error_path(with(R"("f": {"type": "power-modulus", "c": 1, "kappa": 1, "values": [0, "a"]})")) ==
        "/f/values/1");
  CHECK(error_path(with(R"("f": {"type": "zero", "c": 1})")) == "/f/type");
  CHECK(error_path(with(R"("quad_tol": 0)")) == "/quad_tol");
  CHECK(error_path(with(R"("extra": 0)")) == "/extra");
  CHECK(error_path(R"({"process": {"type": "bm", "tau": 1, "T": 1, "beta1": 0.5, "beta2": 0.95}})") ==
        "/process/type");
  CHECK(error_path(R"({"process": {"type": "ou", "tau": 1, "T": 1, "beta1": 0.5}})") == "/process/beta2");
  CHECK(error_path(R"({"process": {"type": "ou", "tau": -1, "T": 1, "beta1": 0.5, "beta2": 0.95}})") ==
        "/process/tau");
}

TEST_CASE("inadmissible betas are a config error") {
  try {
    parse_config(R"({"process": {"type": "ou", "tau": 1, "T": 1, "beta1": 0.9, "beta2": 0.9}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.path() == "/process");
    CHECK(std::string(e.what()).rfind("/process: inadmissible betas", 0) == 0);
  }
}

TEST_CASE("explicit alpha and drift") {
  const auto c = parse_config(with(
      R"("zeta_alpha": 2.5, "f": {"type": "power-modulus", "c": 0.5, "kappa": 1, "values": [0, 0.1, 0.3]})"));
  CHECK_FALSE(c.alpha_auto);
  CHECK(c.model.alpha_zeta == 2.5);
  CHECK(c.f(0.25, 1.0) == doctest::Approx(0.05));
  CHECK(c.f(1.0, 1.0) == doctest::Approx(0.3));
  CHECK(c.f.integral(1.0) == doctest::Approx(0.125));
}

TEST_CASE("drift check") {
  auto c = parse_config(
      with(R"("f": {"type": "power-modulus", "c": 0.5, "kappa": 1, "values": [0, 0.05, 0.1]})"));
  CHECK(check_drift(c).empty());
  c = parse_config(with(R"("f": {"type": "power-modulus", "c": 0.5, "kappa": 1, "values": [0, 10]})"));
  CHECK_FALSE(check_drift(c).empty());
  // delta(y) = 2y exceeds d itself.
  c = parse_config(with(R"("f": {"type": "power-modulus", "c": 2, "kappa": 1, "values": [0, 0]})"));
  CHECK_FALSE(check_drift(c).empty());
}

TEST_CASE("linear x grid") {
  const auto c = parse_config(with(R"("x_grid": {"min": 1, "max": 2, "count": 3, "spacing": "linear"})"));
  CHECK(c.x_grid.values() == std::vector<double>{1.0, 1.5, 2.0});
}

TEST_CASE("config files in the repository parse") {
  for (const char* name : {"ou_desk.json", "ou_admissible.json", "ou_drift.json"}) {
    CHECK_NOTHROW(load_config(std::string(ORLICZ_CONFIGS) + "/" + name));
  }
  CHECK_THROWS_AS(load_config(std::string(ORLICZ_CONFIGS) + "/ou_headline.json"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
