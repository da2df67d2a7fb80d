#include "photonholes/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <numbers>
#include <stdexcept>

#include "photonholes/analysis.hpp"
#include "photonholes/ports.hpp"

namespace photonholes {

namespace {

constexpr std::pair<Scenario, std::string_view> kScenarioNames[] = {
    {Scenario::fig3a, "fig3a"},         {Scenario::fig3b, "fig3b"}, {Scenario::fig3c, "fig3c"},
    {Scenario::fig3d, "fig3d"},         {Scenario::phase_scan, "phase_scan"},
    {Scenario::bell, "bell"},           {Scenario::tpa_compare, "tpa_compare"}};

// Stream index reserved for histogram jitter, disjoint from pulse batches.
constexpr std::uint64_t kJitterStream = 0xffff'ffff'0000'0001ULL;

int side_peak_reach(const ExperimentConfig& cfg) {
  return static_cast<int>(std::floor(cfg.window / cfg.train.period() + 1e-9));
}

RouteReport route_report(const FockState& state, std::span<const ModeLabel> a, std::span<const ModeLabel> b) {
  RouteReport r;
  r.p_both = joint_click_probabilities(state, a, b, ideal_detector()).p_both;
  r.marginal_a = number_distribution(state, a);
  r.marginal_b = number_distribution(state, b);
  r.tv_to_poisson_a = total_variation(r.marginal_a, poisson_distribution(mean_photon_number(r.marginal_a), r.marginal_a.size()));
  r.tv_to_poisson_b = total_variation(r.marginal_b, poisson_distribution(mean_photon_number(r.marginal_b), r.marginal_b.size()));
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Expected counts per bin: each peak spread by the combined detector jitter.
std::vector<double> expected_histogram(const ExperimentConfig& cfg, std::span<const std::pair<int, double>> peaks) {
  TacHistogram geometry(cfg.bin_width, cfg.window);
  std::vector<double> bins(geometry.bin_count(), 0.0);
  const double sigma = std::sqrt(2.0) * cfg.detectors.jitter_sigma;
  for (const auto& [k, expected] : peaks) {
    const double center = k * cfg.train.period();
    if (sigma == 0.0) {
      TacHistogram probe(cfg.bin_width, cfg.window);
      probe.add(center);
      for (std::size_t i = 0; i < bins.size(); ++i)
        if (probe.counts()[i] != 0) bins[i] += expected;
      continue;
    }
    for (std::size_t i = 0; i < bins.size(); ++i) {
      const double lo = (geometry.bin_start(i) - center) / sigma;
      const double hi = (geometry.bin_end(i) - center) / sigma;
      bins[i] += expected * (normal_cdf(hi) - normal_cdf(lo));
    }
  }
  return bins;
}

ScenarioResult run_histogram_scenario(const ExperimentConfig& cfg) {
  const SourceParams sources = scenario_sources(cfg);
  const FockState pulse = photon_hole_state(sources);
  const auto det_a = ports::detector_a();
  const auto det_b = ports::detector_b();
  const auto n = static_cast<double>(cfg.train.n_pulses);
  const int reach = side_peak_reach(cfg);

  ScenarioResult result{cfg.scenario, cfg.mode, std::nullopt, std::nullopt, {}, {}, {}, std::nullopt, std::nullopt};
  if (cfg.mode == RunMode::exact) {
    const ClickProbabilities p = joint_click_probabilities(pulse, det_a, det_b, cfg.detectors);
    result.exact_probs = p;
    std::vector<std::pair<int, double>> peaks;
    double side = 0.0;
    for (int k = -reach; k <= reach; ++k) {
      const double expected = k == 0 ? n * p.p_both : n * p.p_a() * p.p_b();
      peaks.emplace_back(k, expected);
      if (k != 0) side += expected;
    }
    result.expected_bins = expected_histogram(cfg, peaks);
    result.summary.singles_a = p.p_a();
    result.summary.singles_b = p.p_b();
    result.summary.zero_delay_peak = n * p.p_both;
    result.summary.mean_side_peak = reach > 0 ? side / (2.0 * reach) : 0.0;
    if (cfg.scenario == Scenario::fig3c || cfg.scenario == Scenario::fig3d) {
      SourceParams constructive = sources;
      constructive.phi = 0.0;
      SourceParams destructive = sources;
      destructive.phi = std::numbers::pi;
      result.summary.visibility =
          visibility_from_peaks(pulse_click_probabilities(constructive, cfg.detectors).p_both,
                                pulse_click_probabilities(destructive, cfg.detectors).p_both)
              .visibility;
    }
    return result;
  }

  const ClickSampler sampler(pulse, det_a, det_b, cfg.detectors);
  const ClickRecord clicks = simulate_clicks(sampler, cfg.train.n_pulses, cfg.seed);
  RngStream jitter = derive_stream(cfg.seed, kJitterStream);
  TacHistogram hist = accumulate_coincidences(clicks, cfg.train, TacHistogram(cfg.bin_width, cfg.window),
                                              cfg.detectors, jitter);
  double side = 0.0;
  for (const auto& [k, count] : hist.peak_counts(cfg.train.period())) {
    if (k == 0) {
      result.summary.zero_delay_peak = static_cast<double>(count);
    } else {
      side += static_cast<double>(count);
    }
  }
  result.summary.mean_side_peak = reach > 0 ? side / (2.0 * reach) : 0.0;
  result.summary.singles_a = static_cast<double>(clicks.clicks_a.size()) / n;
  result.summary.singles_b = static_cast<double>(clicks.clicks_b.size()) / n;
  result.histogram = std::move(hist);
  return result;
}

std::vector<double> uniform_phases(int points) {
  if (points < 3) throw std::invalid_argument("a phase scan needs at least 3 points");
  std::vector<double> phis(points);
  for (int i = 0; i < points; ++i) phis[i] = 2.0 * std::numbers::pi * i / points;
  return phis;
}

}  // namespace

std::string_view to_string(Scenario s) {
  for (const auto& [value, name] : kScenarioNames)
    if (value == s) return name;
  return "unknown";
}

std::string_view to_string(RunMode m) { return m == RunMode::exact ? "exact" : "monte_carlo"; }

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (const auto& [value, n] : kScenarioNames)
    if (n == name) return value;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  sources.validate();
  train.validate();
  detectors.validate();
  franson.validate();
  TacHistogram(bin_width, window);
  if (scan_points < 3) throw std::invalid_argument("scan_points must be at least 3");
  if (scenario == Scenario::bell && train.n_pulses < franson.delay_pulses + 1)
    throw std::invalid_argument("bell scenario needs more pulses than delay_pulses");
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig cfg;
  cfg.sources.xi = 0.04;
  cfg.sources.alpha = matched_alpha(cfg.sources.xi);
  cfg.sources.overlap = 0.85;
  cfg.sources.phi = std::numbers::pi;
  return cfg;
}

SourceParams scenario_sources(const ExperimentConfig& cfg) {
  SourceParams s = cfg.sources;
  switch (cfg.scenario) {
    case Scenario::fig3a: s.xi = 0.0; break;
    case Scenario::fig3b: s.alpha = {}; break;
    case Scenario::fig3c: s.phi = std::numbers::pi; break;
    case Scenario::fig3d: s.phi = 0.0; break;
    default: break;
  }
  return s;
}

ClickProbabilities pulse_click_probabilities(const SourceParams& sources, const DetectorConfig& det) {
  return joint_click_probabilities(photon_hole_state(sources), ports::detector_a(), ports::detector_b(), det);
}

double incoherent_baseline(const SourceParams& sources, const DetectorConfig& det) {
  SourceParams laser_only = sources;
  laser_only.xi = 0.0;
  SourceParams pairs_only = sources;
  pairs_only.alpha = {};
  return pulse_click_probabilities(laser_only, det).p_both + pulse_click_probabilities(pairs_only, det).p_both;
}

std::vector<std::pair<double, double>> phase_scan(const ExperimentConfig& cfg, std::span<const double> phis) {
  if (phis.empty()) throw std::invalid_argument("phase scan needs at least one phase");
  cfg.validate();
  std::vector<std::pair<double, double>> out;
  out.reserve(phis.size());
  for (std::size_t i = 0; i < phis.size(); ++i) {
    SourceParams s = cfg.sources;
    s.phi = phis[i];
    if (cfg.mode == RunMode::exact) {
      out.emplace_back(phis[i], pulse_click_probabilities(s, cfg.detectors).p_both);
      continue;
    }
    const ClickSampler sampler(photon_hole_state(s), ports::detector_a(), ports::detector_b(), cfg.detectors);
    const ClickRecord clicks = simulate_clicks(sampler, cfg.train.n_pulses, cfg.seed + i);
    std::vector<std::int64_t> both;
    std::set_intersection(clicks.clicks_a.begin(), clicks.clicks_a.end(), clicks.clicks_b.begin(),
                          clicks.clicks_b.end(), std::back_inserter(both));
    out.emplace_back(phis[i], static_cast<double>(both.size()) / static_cast<double>(cfg.train.n_pulses));
  }
  return out;
}

TpaComparison tpa_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  TpaComparison out{};
  SourceParams hole = cfg.sources;
  hole.phi = std::numbers::pi;
  out.interference = route_report(photon_hole_state(hole), ports::detector_a(), ports::detector_b());
  out.incoherent_baseline = incoherent_baseline(hole, ideal_detector());

  // Two weak laser beams: the same pulse split evenly, then absorbed pairwise.
  const ModeLabel a{"tpa-a", 0};
  const ModeLabel b{"tpa-b", 0};
  const Complex beam = cfg.sources.alpha / std::numbers::sqrt2;
  const FockState beams = tensor(coherent_pulse(beam, a), coherent_pulse(beam, b));
  const auto input = joint_number_distribution(beams, std::span(&a, 1), std::span(&b, 1));
  out.tpa_input_p11 = input[1][1];
  out.tpa_input_coincidence = joint_click_probabilities(beams, a, b, ideal_detector()).p_both;
  const TpaResult absorbed = idealized_tpa(beams, a, b);
  out.tpa_removed_mass = absorbed.removed_mass;
  out.tpa = route_report(absorbed.state, std::span(&a, 1), std::span(&b, 1));

  out.tv_between_routes_a = total_variation(out.tpa.marginal_a, out.interference.marginal_a);
  out.tv_between_routes_b = total_variation(out.tpa.marginal_b, out.interference.marginal_b);
  return out;
}

ScenarioResult run_scenario(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.scenario) {
    case Scenario::fig3a:
    case Scenario::fig3b:
    case Scenario::fig3c:
    case Scenario::fig3d:
      return run_histogram_scenario(cfg);
    default:
      break;
  }

  ScenarioResult result{cfg.scenario, cfg.mode, std::nullopt, std::nullopt, {}, {}, {}, std::nullopt, std::nullopt};
  const ClickProbabilities p = pulse_click_probabilities(cfg.sources, cfg.detectors);
  result.summary.singles_a = p.p_a();
  result.summary.singles_b = p.p_b();
  result.summary.zero_delay_peak = static_cast<double>(cfg.train.n_pulses) * p.p_both;
  result.summary.mean_side_peak = static_cast<double>(cfg.train.n_pulses) * p.p_a() * p.p_b();

  if (cfg.scenario == Scenario::phase_scan) {
    const auto phis = uniform_phases(cfg.scan_points);
    result.scan = phase_scan(cfg, phis);
    std::vector<double> values;
    for (const auto& [phi, v] : result.scan) values.push_back(v);
    result.summary.visibility = fit_fringe(phis, values).visibility;
  } else if (cfg.scenario == Scenario::bell) {
    BellReport bell{};
    bell.fringe = calibrate_franson(cfg.sources, cfg.franson, cfg.train, cfg.scan_points);
    bell.settings = optimal_chsh_settings(bell.fringe.phase_offset);
    bell.S = chsh_S(cfg.sources, cfg.franson, cfg.train, bell.settings);
    bell.rate_at_config_phases = franson_coincidence_rate(cfg.sources, cfg.franson, cfg.train, cfg.seed);
    result.summary.visibility = bell.fringe.visibility;
    result.summary.S = bell.S;
    result.bell = bell;
  } else if (cfg.scenario == Scenario::tpa_compare) {
    result.tpa = tpa_compare(cfg);
  }
  return result;
}

}  // namespace photonholes
