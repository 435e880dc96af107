#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "catloss/csv.hpp"
#include "catloss/figures.hpp"
#include "catloss/formulas.hpp"
#include "catloss/sweep.hpp"
#include "catloss/validation.hpp"
#include "doctest.h"

using namespace catloss;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("catloss_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CATLOSS_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_file(const std::string& name, const std::string& text) {
  const auto p = scratch_dir() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

double cell(const csv::Table& t, std::size_t row, const std::string& column) {
  const auto& h = t.header();
  const auto it = std::find(h.begin(), h.end(), column);
  REQUIRE(it != h.end());
  return std::stod(t.rows().at(row).at(static_cast<std::size_t>(it - h.begin())));
}

std::string where_of(const std::string& text) {
  try {
    sweep::validate(sweep::parse_config(text));
  } catch (const sweep::ConfigError& e) {
    return e.where();
  }
  return "";
}

}  // namespace

TEST_CASE("numbers are written in shortest round-trip form") {
  CHECK(csv::format_number(0.1) == "0.1");
  CHECK(csv::format_number(0.0) == "0");
  CHECK(csv::format_number(-0.0) == "0");
  CHECK(csv::format_number(1.0) == "1");
  CHECK(csv::format_number(1e-300) == "1e-300");
  CHECK(csv::format_number(NAN) == "nan");
  CHECK(csv::format_number(-INFINITY) == "-inf");
  std::mt19937_64 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::ldexp(static_cast<double>(rng() >> 11), -53) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::strtod(csv::format_number(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("csv table layout") {
  csv::Table t({"a", "b"});
  t.add_row(std::vector<double>{1.5, 2.0});
  t.add_row(std::vector<std::string>{"x", "none"});
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), std::invalid_argument);
  std::ostringstream ss;
  t.write(ss);
  CHECK(ss.str() == "a,b\n1.5,2\nx,none\n");
  CHECK_THROWS_AS(csv::Table({}), std::invalid_argument);
  CHECK_THROWS_AS(t.write(fs::path("/nonexistent_dir_catloss/x.csv")), std::runtime_error);
}

TEST_CASE("figure 1 surface") {
  const auto t = figures::run_figure(1, {});
  CHECK(t.header() == std::vector<std::string>{"theta", "p", "concurrence"});
  CHECK(t.rows().size() == 181u * 101u);
  CHECK(figures::overlap_concurrence(1.0, kPi) == 1.0);
  CHECK(figures::overlap_concurrence(1.0, 0.3) == 0.0);
  CHECK(figures::overlap_concurrence(0.0, 1.0) == 1.0);
  // p = <a|-a>^2 links the surface to the alpha form
  for (double a : {0.1, 0.4, 0.9}) {
    const double p = std::exp(-4.0 * a * a);
    for (double theta : {0.0, 1.0, 2.5, kPi}) {
      CHECK(figures::overlap_concurrence(p, theta) == doctest::Approx(formulas::concurrence_pure(a, theta)).epsilon(1e-12));
    }
  }
  for (const auto& r : t.rows()) {
    const double c = std::stod(r[2]);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0 + 1e-12);
  }
}

TEST_CASE("figure 2 limits") {
  const auto t = figures::run_figure(2, {});
  CHECK(t.header() == std::vector<std::string>{"alpha", "pf_eta0.3", "pf_eta0.6", "pf_eta0.9"});
  REQUIRE(t.rows().size() == 401u);
  CHECK(cell(t, 0, "pf_eta0.3") == doctest::Approx(0.35));
  CHECK(cell(t, 0, "pf_eta0.9") == doctest::Approx(0.05));
  for (const char* col : {"pf_eta0.3", "pf_eta0.6", "pf_eta0.9"}) CHECK(std::abs(cell(t, 400, col) - 0.5) < 1e-3);
  CHECK(cell(t, 400, "alpha") == 4.0);
  CHECK(cell(t, 100, "alpha") == doctest::Approx(1.0));
}

TEST_CASE("figures 3 to 6 layouts and first rows") {
  figures::Overrides small;
  small.steps = 21;
  const auto f3 = figures::run_figure(3, small);
  CHECK(f3.rows().size() == 20u);
  CHECK(f3.header().size() == 1u + 3u * 4u);
  CHECK(f3.header()[1] == "ghz_one_eta0.3");
  small.sides = formulas::Sides::two;
  CHECK(figures::run_figure(3, small).header().size() == 1u + 3u * 3u);

  const auto f4 = figures::run_figure(4, {});
  CHECK(f4.header().size() == 7u);
  CHECK(f4.header()[1] == "pfm_m2_eta0.99");
  CHECK(cell(f4, 0, "pfm_m5_eta0.1") == doctest::Approx(0.45));

  const auto f5 = figures::run_figure(5, {});
  CHECK(f5.header() ==
        std::vector<std::string>{"alpha", "C_minus_m2", "C_minus_m5", "C_minus_m8", "C_plus_m2", "C_plus_m5", "C_plus_m8"});
  for (const char* col : {"C_minus_m2", "C_minus_m5", "C_minus_m8"}) CHECK(cell(f5, 0, col) == doctest::Approx(0.8987).epsilon(1e-4));
  for (const char* col : {"C_plus_m2", "C_plus_m5", "C_plus_m8"}) CHECK(cell(f5, 0, col) == 0.0);
  const auto f6 = figures::run_figure(6, {});
  CHECK(cell(f6, 0, "C_minus_m2") == doctest::Approx(2.0 * std::pow(0.1, 1.5) / 1.1));

  figures::Overrides one;
  one.m = 5;
  one.parity = formulas::Parity::even;
  one.eta = 0.5;
  CHECK(figures::run_figure(5, one).header() == std::vector<std::string>{"alpha", "C_plus_m5"});
}

TEST_CASE("figure overrides are checked") {
  figures::Overrides o;
  o.eta = 0.5;
  CHECK_THROWS_AS(figures::run_figure(1, o), std::invalid_argument);
  o = {};
  o.sides = formulas::Sides::one;
  CHECK_THROWS_AS(figures::run_figure(2, o), std::invalid_argument);
  o = {};
  o.steps = 1;
  CHECK_THROWS_AS(figures::run_figure(2, o), std::invalid_argument);
  o = {};
  o.eta = 1.5;
  CHECK_THROWS_AS(figures::run_figure(4, o), std::invalid_argument);
  CHECK_THROWS_AS(figures::run_figure(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(figures::run_figure(7, {}), std::invalid_argument);
}

TEST_CASE("sweep config diagnostics") {
  const std::string good = R"({"axis": {"name": "alpha", "start": 0, "stop": 1, "steps": 5}, "quantities": ["phase_flip_prob"]})";
  CHECK(where_of(good).empty());
  CHECK(where_of("{\n  \"axis\": {\n    \"name\": \"alpha\",,\n") == "line 3, column 21");
  CHECK(where_of(R"({"axis": {"name": "alpha", "start": 0, "stop": 1, "steps": 5}, "quantities": ["phase_flip_prob"], "extra": 1})") == "/extra");
  CHECK(where_of(R"({"axis": {"name": "alpha", "start": "0", "stop": 1, "steps": 5}, "quantities": ["phase_flip_prob"]})") == "/axis/start");
  CHECK(where_of(R"({"axis": {"name": "alpha", "start": 0, "stop": 1, "steps": 2.5}, "quantities": ["phase_flip_prob"]})") == "/axis/steps");
  CHECK(where_of(R"({"axis": {"name": "beta", "start": 0, "stop": 1, "steps": 5}, "quantities": ["phase_flip_prob"]})") == "/axis/name");
  CHECK(where_of(R"({"axis": {"name": "alpha", "start": 0, "stop": 1, "steps": 5}, "quantities": ["phase_flip_prob", "nope"]})") == "/quantities/1");
  CHECK(where_of(R"({"axis": {"name": "alpha", "start": 0, "stop": 1, "steps": 5}, "quantities": []})") == "/quantities");
  CHECK(where_of(R"({"axis": {"name": "alpha", "start": 0, "stop": 1}, "quantities": ["phase_flip_prob"]})") == "/axis/steps");
  CHECK(where_of(R"({"axis": {"name": "eta", "start": 0, "stop": 1.5, "steps": 5}, "quantities": ["phase_flip_prob"]})") == "/axis/stop");
  CHECK(where_of(R"({"axis": {"name": "alpha", "start": 0, "stop": 1, "steps": 5}, "fixed": {"eta": 2}, "quantities": ["phase_flip_prob"]})") == "/fixed/eta");
  CHECK(where_of(R"({"axis": {"name": "alpha", "start": 0, "stop": 1, "steps": 5}, "fixed": {"parity": "up"}, "quantities": ["phase_flip_prob"]})") == "/fixed/parity");
  CHECK(where_of(R"({"axis": {"name": "alpha", "start": 0, "stop": 1, "steps": 5}, "quantities": ["phase_flip_prob"], "epsilon": 0})") == "/epsilon");
}

TEST_CASE("sweep rows, alpha* columns and overrides") {
  auto c = sweep::parse_config(
      R"({"axis": {"name": "alpha", "start": 0, "stop": 10, "steps": 1001},
          "fixed": {"eta": 0.9, "m": 5},
          "quantities": ["concurrence_m_plus", "concurrence_m_minus", "phase_flip_prob_m"]})");
  const auto t = sweep::run(c);
  CHECK(t.rows().size() == 1001u);
  CHECK(t.header().back() == "alpha_star_concurrence_m_minus");
  const double plus = cell(t, 0, "alpha_star_concurrence_m_plus");
  const double minus = cell(t, 0, "alpha_star_concurrence_m_minus");
  CHECK(std::abs(plus - minus) <= 0.01 + 1e-12);
  CHECK(t.rows()[500].back() == t.rows()[0].back());

  c.axis.steps = 1;
  c.axis.start = 0.5;
  CHECK(sweep::run(c).rows().size() == 1u);

  // never drops below epsilon
  auto flat = sweep::parse_config(
      R"({"axis": {"name": "alpha", "start": 0.1, "stop": 1, "steps": 10}, "fixed": {"eta": 1}, "quantities": ["concurrence_m_minus"]})");
  CHECK(sweep::run(flat).rows()[0].back() == "none");

  figures::Overrides o;
  o.alpha_max = 2.0;
  o.steps = 3;
  o.eta = 0.5;
  sweep::apply_overrides(c, o, 0.01, std::string("x.csv"));
  CHECK(c.axis.stop == 2.0);
  CHECK(c.axis.steps == 3);
  CHECK(c.fixed.eta == 0.5);
  CHECK(c.epsilon == 0.01);
  CHECK(c.output == "x.csv");

  auto eta_axis = sweep::parse_config(
      R"({"axis": {"name": "eta", "start": 0.1, "stop": 1, "steps": 10}, "quantities": ["phase_flip_prob"]})");
  figures::Overrides clash;
  clash.eta = 0.3;
  CHECK_THROWS_AS(sweep::apply_overrides(eta_axis, clash, std::nullopt, std::nullopt), sweep::ConfigError);
  figures::Overrides amax;
  amax.alpha_max = 3.0;
  CHECK_THROWS_AS(sweep::apply_overrides(eta_axis, amax, std::nullopt, std::nullopt), sweep::ConfigError);
}

TEST_CASE("theta sweep matches the figure 1 cross-section") {
  const double p = 0.5;
  const double alpha = std::sqrt(-std::log(p) / 4.0);
  auto c = sweep::parse_config(R"({"axis": {"name": "theta", "start": 0, "stop": 6.283185307179586, "steps": 181},
                                   "quantities": ["concurrence_pure"]})");
  c.fixed.alpha = alpha;
  const auto t = sweep::run(c);
  const auto fig = figures::run_figure(1, {});
  for (std::size_t i = 0; i < 181; ++i) {
    // figure 1 rows: theta major, 101 p values each; p = 0.5 is column index 50
    const auto& row = fig.rows()[i * 101 + 50];
    REQUIRE(std::stod(row[1]) == doctest::Approx(0.5));
    CHECK(std::stod(t.rows()[i][1]) == doctest::Approx(std::stod(row[2])).epsilon(1e-12));
  }
}

TEST_CASE("sweep over m and undefined points") {
  auto c = sweep::parse_config(R"({"axis": {"name": "m", "start": 1, "stop": 8, "steps": 8},
                                   "fixed": {"alpha": 0.5, "eta": 0.9}, "quantities": ["phase_flip_prob_m"]})");
  const auto t = sweep::run(c);
  CHECK(t.rows().size() == 8u);
  CHECK(t.rows()[2][0] == "3");
  CHECK(std::stod(t.rows()[2][1]) == doctest::Approx(formulas::phase_flip_prob(0.5, 0.9)).epsilon(1e-15));
  CHECK(where_of(R"({"axis": {"name": "m", "start": 1, "stop": 2, "steps": 3}, "quantities": ["phase_flip_prob_m"]})") == "/axis/steps");

  const auto bad = sweep::parse_config(
      R"({"axis": {"name": "alpha", "start": 0, "stop": 1, "steps": 3}, "quantities": ["phase_flip_prob", "ghz_concurrence"]})");
  try {
    sweep::run(bad);
    FAIL("expected a config error");
  } catch (const sweep::ConfigError& e) {
    CHECK(e.where() == "/quantities/1");
  }
}

TEST_CASE("validation report") {
  validation::Options strict;
  strict.seed = 7;
  strict.tolerance = 0.0;
  const auto failing = validation::run(strict);
  CHECK_FALSE(failing.passed());
  const auto doc = validation::to_json(failing, false);
  CHECK(doc["status"] == "fail");
  CHECK(doc["seed"] == 7);
  CHECK_FALSE(doc.contains("wall_time_s"));
  CHECK(validation::to_json(failing, true).contains("wall_time_s"));
  bool identity_listed = false;
  for (const auto& c : doc["checks"]) {
    CHECK(c.contains("max_error"));
    CHECK(c.contains("grid"));
    if (c["name"] == "flip_identity_m3") {
      identity_listed = true;
      CHECK(c["max_error"].get<double>() < 1e-14);
    }
  }
  CHECK(identity_listed);
}

TEST_CASE("command-line exit codes and outputs") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("fig 7") == 2);
  CHECK(run_cli("fig 1 --eta 0.5") == 2);
  CHECK(run_cli("fig 2 --parity sideways") == 2);
  CHECK(run_cli("--help") == 0);

  const auto out = scratch_dir() / "fig2.csv";
  CHECK(run_cli("fig 2 --eta 0.5 --steps 11 --out \"" + out.string() + "\"") == 0);
  const auto text = slurp(out);
  CHECK(text.rfind("alpha,pf_eta0.5\n0,0.25\n", 0) == 0);
  CHECK(text.find('\r') == std::string::npos);

  const auto cfg = write_file("sweep.json", R"({"axis": {"name": "alpha", "start": 0.5, "stop": 1, "steps": 3},
                                               "quantities": ["phase_flip_prob"], "output": "ignored.csv"})");
  const auto sweep_out = scratch_dir() / "sweep.csv";
  CHECK(run_cli("sweep --config \"" + cfg.string() + "\" --out \"" + sweep_out.string() + "\"") == 0);
  CHECK(slurp(sweep_out).rfind("alpha,phase_flip_prob\n0.5,", 0) == 0);
  CHECK(run_cli("sweep --config \"" + (scratch_dir() / "missing.json").string() + "\"") == 2);
  const auto broken = write_file("broken.json", "{\"axis\": ");
  CHECK(run_cli("sweep --config \"" + broken.string() + "\"") == 2);
  CHECK(run_cli("validate --seed 3 --tolerance 0 --out \"" + (scratch_dir() / "r.json").string() + "\"") == 1);
  CHECK(slurp(scratch_dir() / "r.json").find("\"status\": \"fail\"") != std::string::npos);
}
