#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "photonholes/apparatus.hpp"
#include "photonholes/detection.hpp"
#include "photonholes/sources.hpp"

namespace photonholes {

enum class Scenario { fig3a, fig3b, fig3c, fig3d, phase_scan, bell, tpa_compare };
enum class RunMode { monte_carlo, exact };

std::string_view to_string(Scenario s);
std::string_view to_string(RunMode m);
std::optional<Scenario> parse_scenario(std::string_view name);

struct ExperimentConfig {
  SourceParams sources;
  PulseTrainConfig train;
  DetectorConfig detectors;
  FransonConfig franson;
  double bin_width = 0.5e-9;  ///< seconds
  double window = 45e-9;      ///< half range, seconds
  Scenario scenario = Scenario::fig3c;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::monte_carlo;
  int scan_points = 16;

  void validate() const;
};

/// xi = 0.04, alpha = matched_alpha(xi), overlap 0.85, fig3c, seed 0.
ExperimentConfig default_experiment_config();

/// Source settings a scenario actually runs with: fig3a blocks the PDC arm,
/// fig3b the coherent arm, fig3c/fig3d force phi to pi/0.
SourceParams scenario_sources(const ExperimentConfig& cfg);

struct Summary {
  std::optional<double> visibility;
  std::optional<double> S;
  double singles_a = 0.0;  ///< clicks per pulse
  double singles_b = 0.0;
  double zero_delay_peak = 0.0;
  double mean_side_peak = 0.0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

struct RouteReport {
  double p_both;
  std::vector<double> marginal_a;
  std::vector<double> marginal_b;
  double tv_to_poisson_a;
  double tv_to_poisson_b;
};

struct TpaComparison {
  RouteReport tpa;
  RouteReport interference;
  /// Sum of the equal-time both-click probabilities of each source alone.
  double incoherent_baseline;
  double tv_between_routes_a;
  double tv_between_routes_b;
  double tpa_removed_mass;
  /// Both-click probability of the TPA input beams before absorption.
  double tpa_input_coincidence;
  /// P(n_a = 1, n_b = 1) of the TPA input beams.
  double tpa_input_p11;
};

struct BellReport {
  FransonFringe fringe;
  std::array<PhasePair, 4> settings;
  double S;
  double rate_at_config_phases;
};

struct ScenarioResult {
  Scenario scenario;
  RunMode mode;
  std::optional<TacHistogram> histogram;       ///< monte_carlo mode
  std::optional<ClickProbabilities> exact_probs;  ///< exact mode, per pulse
  std::vector<double> expected_bins;           ///< exact mode, expected counts per bin
  Summary summary;
  std::vector<std::pair<double, double>> scan;  ///< phase_scan: (phi, p_both)
  std::optional<TpaComparison> tpa;
  std::optional<BellReport> bell;
};

ScenarioResult run_scenario(const ExperimentConfig& cfg);

/// Equal-time both-click probability per pulse at each phase (exact mode), or
/// its Monte Carlo frequency over cfg.train.n_pulses pulses.
std::vector<std::pair<double, double>> phase_scan(const ExperimentConfig& cfg, std::span<const double> phis);

TpaComparison tpa_compare(const ExperimentConfig& cfg);

/// Equal-time both-click probability of one pulse for the given sources.
ClickProbabilities pulse_click_probabilities(const SourceParams& sources, const DetectorConfig& det);

/// p_both(fig3a) + p_both(fig3b) for these sources.
double incoherent_baseline(const SourceParams& sources, const DetectorConfig& det);

}  // namespace photonholes
