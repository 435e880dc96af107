#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "catloss/figures.hpp"
#include "catloss/sweep.hpp"
#include "catloss/validation.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailed = 1;
constexpr int kUsage = 2;

struct RawOverrides {
  double eta = 0.0;
  int m = 0;
  std::string parity;
  double alpha_max = 0.0;
  int steps = 0;
  std::string sides;
  CLI::Option* eta_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* parity_opt = nullptr;
  CLI::Option* alpha_max_opt = nullptr;
  CLI::Option* steps_opt = nullptr;
  CLI::Option* sides_opt = nullptr;

  void attach(CLI::App* app) {
    eta_opt = app->add_option("--eta", eta, "transmissivity in [0, 1]");
    m_opt = app->add_option("--m", m, "mode-count parameter (>= 1)");
    parity_opt = app->add_option("--parity", parity, "even | odd")->check(CLI::IsMember({"even", "odd"}));
    alpha_max_opt = app->add_option("--alpha-max", alpha_max, "upper end of the alpha grid");
    steps_opt = app->add_option("--steps", steps, "number of grid points");
    sides_opt = app->add_option("--sides", sides, "one | two")->check(CLI::IsMember({"one", "two"}));
  }

  catloss::figures::Overrides get() const {
    catloss::figures::Overrides o;
    if (eta_opt->count()) o.eta = eta;
    if (m_opt->count()) o.m = m;
    if (parity_opt->count()) o.parity = catloss::formulas::parse_parity(parity);
    if (alpha_max_opt->count()) o.alpha_max = alpha_max;
    if (steps_opt->count()) o.steps = steps;
    if (sides_opt->count()) o.sides = catloss::formulas::parse_sides(sides);
    return o;
  }
};

void emit(const catloss::csv::Table& table, const std::string& path) {
  if (path.empty() || path == "-") {
    table.write(std::cout);
    std::cout.flush();
  } else {
    table.write(std::filesystem::path(path));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw catloss::sweep::ConfigError(path, "cannot open config file");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled coherent states under photon loss: figure data, sweeps and validation."};
  app.require_subcommand(1);

  auto* fig = app.add_subcommand("fig", "write the CSV data of figure 1..6");
  int fig_id = 0;
  std::string fig_out;
  RawOverrides fig_overrides;
  fig->add_option("n", fig_id, "figure id")->required()->check(CLI::Range(1, 6));
  fig->add_option("--out", fig_out, "output CSV (default: stdout)");
  fig_overrides.attach(fig);

  auto* sw = app.add_subcommand("sweep", "evaluate quantities on a one-axis grid from a JSON config");
  std::string config_path;
  std::string sweep_out;
  double epsilon = 0.0;
  RawOverrides sweep_overrides;
  sw->add_option("--config", config_path, "sweep config (JSON)")->required();
  auto* out_opt = sw->add_option("--out", sweep_out, "output CSV (overrides the config)");
  auto* eps_opt = sw->add_option("--epsilon", epsilon, "vanishing threshold for alpha* columns");
  sweep_overrides.attach(sw);

  auto* val = app.add_subcommand("validate", "run the seeded validation suite");
  std::uint64_t seed = 7;
  double tolerance = 0.0;
  std::string report_out;
  bool timing = false;
  val->add_option("--seed", seed, "random seed")->capture_default_str();
  auto* tol_opt = val->add_option("--tolerance", tolerance, "replace every check tolerance");
  val->add_option("--out", report_out, "report JSON (default: stdout)");
  val->add_flag("--timing", timing, "include wall times in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*fig) {
      emit(catloss::figures::run_figure(fig_id, fig_overrides.get()), fig_out);
      return kOk;
    }

    if (*sw) {
      auto config = catloss::sweep::parse_config(read_file(config_path));
      catloss::sweep::apply_overrides(config, sweep_overrides.get(),
                                      eps_opt->count() ? std::optional<double>(epsilon) : std::nullopt,
                                      out_opt->count() ? std::optional<std::string>(sweep_out) : std::nullopt);
      const auto table = catloss::sweep::run(config);
      emit(table, config.output.value_or(""));
      return kOk;
    }

    catloss::validation::Options options;
    options.seed = seed;
    if (tol_opt->count()) options.tolerance = tolerance;
    const auto report = catloss::validation::run(options);
    double total = 0.0;
    for (const auto& c : report.checks) {
      std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << "  max_error=" << c.max_error
                << "  tolerance=" << c.tolerance << "\n";
      total += c.seconds;
    }
    std::cerr << (report.passed() ? "all checks passed" : "validation failed") << " (" << total << " s)\n";
    const std::string text = catloss::validation::to_json(report, timing).dump(2) + "\n";
    if (report_out.empty() || report_out == "-") {
      std::cout << text;
      std::cout.flush();
    } else {
      std::ofstream f(report_out, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open '" + report_out + "' for writing");
      f << text;
      if (!f.flush()) throw std::runtime_error("failed writing '" + report_out + "'");
    }
    return report.passed() ? kOk : kValidationFailed;
  } catch (const catloss::sweep::ConfigError& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
