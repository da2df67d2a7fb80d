// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "photonholes/analysis.hpp"
#include "photonholes/io.hpp"

using namespace photonholes;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s -- %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

ExperimentConfig base(Scenario s, RunMode m) {
  ExperimentConfig cfg = default_experiment_config();
  cfg.scenario = s;
  cfg.mode = m;
  cfg.seed = 20240601;
  return cfg;
}

SourceParams matched_sources(double overlap, double phi) {
  SourceParams s;
  s.xi = 0.04;
  s.alpha = matched_alpha(s.xi);
  s.overlap = overlap;
  s.phi = phi;
  return s;
}

void criterion_1() {
  ExperimentConfig cfg = base(Scenario::fig3a, RunMode::monte_carlo);
  cfg.train.n_pulses = 1'000'000;
  const auto start = std::chrono::steady_clock::now();
  const ScenarioResult mc = run_scenario(cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const TacHistogram& h = *mc.histogram;
  const double period = cfg.train.period();
  std::vector<double> heights;
  for (const auto& [k, count] : h.peak_counts(period)) heights.push_back(static_cast<double>(count));
  // Counts must sit on the pulse comb, not between the teeth.
  std::int64_t on_comb = 0;
  for (std::size_t i = 0; i < h.bin_count(); ++i) {
    const double c = h.bin_center(i);
    if (std::abs(c - std::round(c / period) * period) < 2e-9) on_comb += h.counts()[i];
  }
  const double comb_fraction = h.total() > 0 ? static_cast<double>(on_comb) / static_cast<double>(h.total()) : 0.0;
  const bool all_filled = std::all_of(heights.begin(), heights.end(), [](double x) { return x > 0.0; });
  const double p = chi_square_equal_heights_p_value(heights);

  const ScenarioResult exact = run_scenario(base(Scenario::fig3a, RunMode::exact));
  const double ratio = exact.summary.mean_side_peak / exact.summary.zero_delay_peak;

  const bool ok = heights.size() >= 7 && all_filled && comb_fraction > 0.99 && p > 0.01 &&
                  std::abs(ratio - 1.0) <= 0.01 && seconds < 30.0;
  report(1, "coherent-only constant-height peaks", ok,
         fmt("%zu peaks, on-comb fraction %.4f, chi2 p=%.3f, exact side/center=%.4f, runtime %.1fs",
             heights.size(), comb_fraction, p, ratio, seconds));
}

void criterion_2() {
  const ExperimentConfig cfg = base(Scenario::fig3b, RunMode::exact);
  const ScenarioResult r = run_scenario(cfg);
  const double xi = cfg.sources.xi;
  const double ratio = r.summary.mean_side_peak / r.summary.zero_delay_peak;
  const double rel = ratio / (xi * xi);
  report(2, "PDC-only single zero-delay peak", rel >= 0.5 && rel <= 2.0,
         fmt("side/center=%.4e, xi^2=%.4e, ratio/xi^2=%.3f", ratio, xi * xi, rel));
}

void criterion_3() {
  const double a = run_scenario(base(Scenario::fig3a, RunMode::exact)).summary.zero_delay_peak;
  const double b = run_scenario(base(Scenario::fig3b, RunMode::exact)).summary.zero_delay_peak;
  const double diff = std::abs(a - b) / std::max(a, b);
  report(3, "matched calibration", diff <= 0.10, fmt("fig3a peak %.1f, fig3b peak %.1f, rel diff %.4f", a, b, diff));
}

void criterion_4() {
  auto peaks = [](double overlap, Scenario s) {
    ExperimentConfig cfg = base(s, RunMode::exact);
    cfg.sources.overlap = overlap;
    return run_scenario(cfg).summary;
  };
  const Summary c85 = peaks(0.85, Scenario::fig3c);
  const Summary d85 = peaks(0.85, Scenario::fig3d);
  const Summary c1 = peaks(1.0, Scenario::fig3c);
  const Summary d1 = peaks(1.0, Scenario::fig3d);
  const double v85 = visibility_from_peaks(d85.zero_delay_peak, c85.zero_delay_peak).visibility;
  const double v1 = visibility_from_peaks(d1.zero_delay_peak, c1.zero_delay_peak).visibility;
  const double side85 = std::abs(d85.mean_side_peak - c85.mean_side_peak) / c85.mean_side_peak;
  const double side1 = std::abs(d1.mean_side_peak - c1.mean_side_peak) / c1.mean_side_peak;
  const bool ok = std::abs(v85 - 0.85) <= 0.02 && v1 >= 0.99 && side85 <= 0.01 && side1 <= 0.01;
  report(4, "fig3c/fig3d visibility", ok,
         fmt("V(0.85)=%.4f, V(1)=%.5f, side-peak diff %.2e / %.2e", v85, v1, side85, side1));
}

void criterion_5() {
  const double baseline = incoherent_baseline(matched_sources(1.0, kPi), ideal_detector());
  const double hole = pulse_click_probabilities(matched_sources(1.0, kPi), ideal_detector()).p_both;
  const double bright = pulse_click_probabilities(matched_sources(1.0, 0.0), ideal_detector()).p_both;
  const double r_hole = hole / baseline;
  const double r_bright = bright / baseline;
  report(5, "photon-hole signature", r_hole <= 1e-3 && std::abs(r_bright - 2.0) <= 0.02,
         fmt("baseline %.4e, phi=pi ratio %.2e, phi=0 ratio %.4f", baseline, r_hole, r_bright));
}

void criterion_6() {
  ExperimentConfig cfg = base(Scenario::tpa_compare, RunMode::exact);
  cfg.sources.overlap = 1.0;
  const TpaComparison t = tpa_compare(cfg);
  const double bound = 1e-3 * t.incoherent_baseline;
  const double tv_routes = std::max(t.tv_between_routes_a, t.tv_between_routes_b);
  const double tv_poisson = std::max({t.tpa.tv_to_poisson_a, t.tpa.tv_to_poisson_b, t.interference.tv_to_poisson_a,
                                      t.interference.tv_to_poisson_b});
  const bool ok = t.tpa.p_both <= bound && t.interference.p_both <= bound && tv_routes < 0.02 && tv_poisson < 0.01;
  report(6, "TPA-interference equivalence", ok,
         fmt("p_both tpa %.2e / interference %.2e (bound %.2e), TV routes %.2e, TV Poisson %.2e", t.tpa.p_both,
             t.interference.p_both, bound, tv_routes, tv_poisson));
}

void criterion_7() {
  struct Target {
    double overlap;
    double S;
    double tol;
  };
  const Target targets[] = {{1.0, 2.83, 0.01}, {0.85, 2.40, 0.03}, {0.5, 1.41, 0.03}};
  bool ok = true;
  std::string detail;
  for (const auto& t : targets) {
    ExperimentConfig cfg = base(Scenario::bell, RunMode::exact);
    cfg.sources.overlap = t.overlap;
    const ScenarioResult r = run_scenario(cfg);
    const double S = *r.summary.S;
    const bool hit = std::abs(S - t.S) <= t.tol;
    ok = ok && hit;
    detail += fmt("gamma=%.2f: V=%.4f S=%.4f (target %.2f+-%.2f)%s; ", t.overlap, r.bell->fringe.visibility, S, t.S,
                  t.tol, hit ? "" : " MISS");
  }
  report(7, "CHSH S versus overlap", ok, detail);
}

// Property suites, run inline without scenario runs.

double beam_splitter_oracle_error() {
  constexpr int cut = 4;
  constexpr int dim = (cut + 1) * (cut + 1);
  auto idx = [](int a, int b) { return a * (cut + 1) + b; };
  const ModeLabel a{"a", 0};
  const ModeLabel b{"b", 0};
  double worst = 0.0;
  for (const auto& [t, theta] : {std::pair{0.5, 0.0}, std::pair{0.3, 0.8}, std::pair{0.9, -2.0}}) {
    const double x = std::acos(std::sqrt(t));
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
    for (int na = 0; na <= cut; ++na)
      for (int nb = 0; nb <= cut; ++nb) {
        if (nb > 0 && na < cut) g(idx(na + 1, nb - 1), idx(na, nb)) += x * std::polar(1.0, -theta) * std::sqrt(double((na + 1) * nb));
        if (na > 0 && nb < cut) g(idx(na - 1, nb + 1), idx(na, nb)) += x * std::polar(1.0, theta) * std::sqrt(double(na * (nb + 1)));
      }
    const Eigen::MatrixXcd ig = Complex(0.0, 1.0) * g;
    const Eigen::MatrixXcd u = ig.exp();
    for (int na = 0; na <= cut; ++na)
      for (int nb = 0; na + nb <= cut; ++nb) {
        const int counts[] = {na, nb};
        const FockState out = apply_beam_splitter(make_number_state({a, b}, cut, counts), a, b, t, theta);
        for (int ma = 0; ma <= cut; ++ma)
          for (int mb = 0; mb <= cut; ++mb) {
            const int m[] = {ma, mb};
            worst = std::max(worst, std::abs(out.amplitude(m) - u(idx(ma, mb), idx(na, nb))));
          }
      }
  }
  return worst;
}

void criterion_8() {
  std::ostringstream detail;
  bool ok = true;

  const double oracle = beam_splitter_oracle_error();
  ok = ok && oracle < 1e-10;
  detail << "oracle " << oracle;

  const ModeLabel a{"a", 0};
  const ModeLabel b{"b", 0};
  const int c11[] = {1, 1};
  const FockState hom = apply_beam_splitter(make_number_state({a, b}, 4, c11), a, b, 0.5);
  const double hom_amp = std::abs(hom.amplitude(c11));
  ok = ok && hom_amp < 1e-12;
  detail << ", HOM " << hom_amp;

  double norm_err = 0.0;
  for (double overlap : {1.0, 0.85, 0.5, 0.0})
    for (double phi : {0.0, 1.0, kPi}) norm_err = std::max(norm_err, std::abs(photon_hole_state(matched_sources(overlap, phi)).norm_squared() - 1.0));
  ok = ok && norm_err < 1e-12;
  detail << ", norm " << norm_err;

  double worst_sigma = 0.0;
  for (double phi : {0.0, kPi}) {
    const FockState s = photon_hole_state(matched_sources(0.85, phi));
    const ClickProbabilities p = joint_click_probabilities(s, ports::detector_a(), ports::detector_b(), ideal_detector());
    const ClickSampler sampler(s, ports::detector_a(), ports::detector_b(), ideal_detector());
    const std::int64_t n = 1'000'000;
    const ClickRecord rec = simulate_clicks(sampler, n, 77);
    std::vector<std::int64_t> both;
    std::set_intersection(rec.clicks_a.begin(), rec.clicks_a.end(), rec.clicks_b.begin(), rec.clicks_b.end(),
                          std::back_inserter(both));
    auto z = [&](double observed, double prob) {
      return std::abs(observed - n * prob) / std::sqrt(n * prob * (1.0 - prob));
    };
    worst_sigma = std::max({worst_sigma, z(static_cast<double>(rec.clicks_a.size()), p.p_a()),
                            z(static_cast<double>(rec.clicks_b.size()), p.p_b()),
                            z(static_cast<double>(both.size()), p.p_both)});
  }
  ok = ok && worst_sigma < 5.0;
  detail << ", MC-exact " << worst_sigma << " sigma";

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> delay(-46e-9, 46e-9);
  bool monoid = true;
  for (int trial = 0; trial < 20; ++trial) {
    TacHistogram h[3] = {TacHistogram(0.5e-9, 45e-9), TacHistogram(0.5e-9, 45e-9), TacHistogram(0.5e-9, 45e-9)};
    for (auto& x : h) {
      for (int i = 0; i < 100; ++i) x.add(delay(rng));
      x.add_starts(trial);
    }
    const TacHistogram e(0.5e-9, 45e-9);
    monoid = monoid && merge(merge(h[0], h[1]), h[2]) == merge(h[0], merge(h[1], h[2])) &&
             merge(h[0], e) == h[0] && merge(e, h[0]) == h[0] && merge(h[0], h[1]) == merge(h[1], h[0]);
    monoid = monoid && parse_histogram(format_histogram(h[trial % 3])) == h[trial % 3];
  }
  ok = ok && monoid;
  detail << ", monoid " << (monoid ? "ok" : "broken");

  bool round_trip = true;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    ExperimentConfig cfg = default_experiment_config();
    cfg.sources.xi = 0.09 * u(rng);
    cfg.sources.overlap = u(rng);
    cfg.detectors.dark_prob = 1e-3 * u(rng);
    cfg.train.n_pulses = 1 + static_cast<std::int64_t>(1e8 * u(rng));
    cfg.seed = rng();
    const std::string text = format_config(cfg);
    round_trip = round_trip && format_config(parse_config(text)) == text;
  }
  ok = ok && round_trip;
  detail << ", config round-trip " << (round_trip ? "ok" : "broken");

  report(8, "property suites", ok, detail.str());
}

}  // namespace

int main() {
  const auto guard = [](int id, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, "exception", false, e.what());
    }
  };
  guard(1, criterion_1);
  guard(2, criterion_2);
  guard(3, criterion_3);
  guard(4, criterion_4);
  guard(5, criterion_5);
  guard(6, criterion_6);
  guard(7, criterion_7);
  guard(8, criterion_8);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
