// Command-line front end: run a scenario, scan the mixer phase, run the Bell
// analysis or compare the TPA and interference routes.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "photonholes/io.hpp"

using namespace photonholes;

namespace {

constexpr int kConfigExit = 2;
constexpr int kRuntimeExit = 3;
constexpr double kDegree = std::numbers::pi / 180.0;

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> scenario;
  std::optional<std::int64_t> pulses;
  std::optional<std::uint64_t> seed;
  bool exact = false;
};

ExperimentConfig load(const CommonOptions& opts) {
  ExperimentConfig cfg = opts.config_path.empty() ? default_experiment_config() : load_config(opts.config_path);
  if (opts.scenario) {
    const auto s = parse_scenario(*opts.scenario);
    if (!s) throw ConfigError("scenario", 0, "unknown scenario '" + *opts.scenario + "'");
    cfg.scenario = *s;
  }
  if (opts.pulses) cfg.train.n_pulses = *opts.pulses;
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.exact) cfg.mode = RunMode::exact;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", 0, e.what());
  }
  return cfg;
}

void write_expected(const ExperimentConfig& cfg, const std::vector<double>& bins, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const TacHistogram geometry(cfg.bin_width, cfg.window);
  out << "# expected_counts n_pulses=" << cfg.train.n_pulses << "\n";
  out << "bin_start_ns,bin_end_ns,expected_counts\n";
  for (std::size_t i = 0; i < bins.size(); ++i) {
    out << format_double(geometry.bin_start(i) * 1e9) << "," << format_double(geometry.bin_end(i) * 1e9) << ","
        << format_double(bins[i]) << "\n";
  }
}

void print_route(const char* name, const RouteReport& r) {
  std::cout << name << ".p_both = " << format_double(r.p_both) << "\n"
            << name << ".tv_to_poisson_a = " << format_double(r.tv_to_poisson_a) << "\n"
            << name << ".tv_to_poisson_b = " << format_double(r.tv_to_poisson_b) << "\n";
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key = value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", opts.seed, "master seed");
  cmd->add_option("--pulses", opts.pulses, "number of pulses")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-hole experiment simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string out_path;
  auto* run = app.add_subcommand("run", "run one scenario and print the summary");
  add_common(run, run_opts);
  run->add_option("--scenario", run_opts.scenario, "fig3a, fig3b, fig3c, fig3d, phase_scan, bell, tpa_compare");
  run->add_option("--out", out_path, "histogram output file");
  run->add_flag("--exact", run_opts.exact, "exact probabilities instead of Monte Carlo");

  CommonOptions scan_opts;
  int points = 16;
  auto* scan = app.add_subcommand("scan-phase", "equal-time coincidence probability versus mixer phase");
  add_common(scan, scan_opts);
  scan->add_option("--points", points, "phases in [0, 360) degrees")->check(CLI::Range(3, 100000));
  scan->add_flag("--exact", scan_opts.exact, "exact probabilities instead of Monte Carlo");

  CommonOptions bell_opts;
  std::optional<int> delay;
  std::optional<double> phase_a_deg;
  std::optional<double> phase_b_deg;
  auto* bell = app.add_subcommand("bell", "Franson fringe calibration and CHSH S");
  add_common(bell, bell_opts);
  bell->add_option("--delay-pulses", delay, "interferometer delay in pulse periods")->check(CLI::PositiveNumber);
  bell->add_option("--phase-a", phase_a_deg, "long-arm phase A, degrees");
  bell->add_option("--phase-b", phase_b_deg, "long-arm phase B, degrees");

  CommonOptions tpa_opts;
  auto* tpa = app.add_subcommand("tpa-compare", "two-photon absorption versus interference");
  add_common(tpa, tpa_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  ExperimentConfig cfg;
  try {
    if (run->parsed()) {
      cfg = load(run_opts);
    } else if (scan->parsed()) {
      cfg = load(scan_opts);
      cfg.scenario = Scenario::phase_scan;
      cfg.scan_points = points;
    } else if (bell->parsed()) {
      cfg = load(bell_opts);
      cfg.scenario = Scenario::bell;
      if (delay) cfg.franson.delay_pulses = *delay;
      if (phase_a_deg) cfg.franson.phase_a = *phase_a_deg * kDegree;
      if (phase_b_deg) cfg.franson.phase_b = *phase_b_deg * kDegree;
      cfg.validate();
    } else {
      cfg = load(tpa_opts);
      cfg.scenario = Scenario::tpa_compare;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const IoError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  }

  try {
    const ScenarioResult r = run_scenario(cfg);
    std::cout << "# scenario = " << to_string(r.scenario) << ", mode = " << to_string(r.mode) << "\n";
    if (r.scenario == Scenario::phase_scan) {
      for (const auto& [phi, p] : r.scan) std::cout << "p_both[" << format_double(phi / kDegree) << "] = " << format_double(p) << "\n";
    }
    if (r.bell) {
      std::cout << "fringe.visibility = " << format_double(r.bell->fringe.visibility) << "\n"
                << "fringe.phase_offset_deg = " << format_double(r.bell->fringe.phase_offset / kDegree) << "\n"
                << "rate_at_config_phases = " << format_double(r.bell->rate_at_config_phases) << "\n";
      for (std::size_t i = 0; i < r.bell->settings.size(); ++i) {
        std::cout << "setting[" << i << "] = " << format_double(r.bell->settings[i].phase_a / kDegree) << ", "
                  << format_double(r.bell->settings[i].phase_b / kDegree) << "\n";
      }
    }
    if (r.tpa) {
      print_route("tpa", r.tpa->tpa);
      print_route("interference", r.tpa->interference);
      std::cout << "incoherent_baseline = " << format_double(r.tpa->incoherent_baseline) << "\n"
                << "tv_between_routes_a = " << format_double(r.tpa->tv_between_routes_a) << "\n"
                << "tv_between_routes_b = " << format_double(r.tpa->tv_between_routes_b) << "\n";
    }
    std::cout << format_summary(r.summary);
    if (!out_path.empty()) {
      if (r.histogram) {
        export_histogram(*r.histogram, out_path);
      } else if (!r.expected_bins.empty()) {
        write_expected(cfg, r.expected_bins, out_path);
      } else {
        std::cerr << "scenario " << to_string(r.scenario) << " produces no histogram; --out ignored\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeExit;
  }
  return 0;
}
