#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "photonholes/analysis.hpp"
#include "photonholes/sources.hpp"

using namespace photonholes;

TEST_CASE("coherent pulse has Poisson statistics and the carrier phase") {
  const Complex alpha = std::polar(0.3, 0.8);
  const ModeLabel m{"laser", 2};
  const FockState s = coherent_pulse(alpha, m, 6);
  CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
  const auto dist = number_distribution(s, m);
  const auto poisson = poisson_distribution(std::norm(alpha), dist.size());
  CHECK(total_variation(dist, poisson) < 1e-8);
  const int one[] = {1};
  const int zero[] = {0};
  CHECK(std::arg(s.amplitude(one) / s.amplitude(zero)) == doctest::Approx(0.8));
  CHECK(g2_zero(dist) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("coherent pulse refuses a truncation that clips the tail") {
  CHECK_THROWS_AS(coherent_pulse(Complex(1.5, 0.0), ModeLabel{"laser", 0}, 4), FockError);
  CHECK_NOTHROW(coherent_pulse(Complex(0.0, 0.0), ModeLabel{"laser", 0}, 1));
}

TEST_CASE("PDC pair state amplitudes") {
  const ModeLabel s{"signal", 0};
  const ModeLabel i{"idler", 0};
  const double xi = 0.04;
  const FockState pair = pdc_pair_state(xi, s, i);
  const double norm = std::sqrt(1.0 + xi * xi + xi * xi * xi * xi);
  const int c00[] = {0, 0};
  const int c11[] = {1, 1};
  const int c22[] = {2, 2};
  const int c10[] = {1, 0};
  CHECK(std::abs(pair.amplitude(c00) - 1.0 / norm) < 1e-15);
  CHECK(std::abs(pair.amplitude(c11) - xi / norm) < 1e-15);
  CHECK(std::abs(pair.amplitude(c22) - xi * xi / norm) < 1e-15);
  CHECK(pair.amplitude(c10) == Complex{});
  CHECK_THROWS_AS(pdc_pair_state(xi, s, s), FockError);
  CHECK_THROWS_AS(pdc_pair_state(xi, s, i, 1), FockError);
  CHECK_THROWS_AS(pdc_pair_state(0.1, s, i), std::invalid_argument);
  CHECK(pdc_pair_state(0.0, s, i).size() == 1);
}

TEST_CASE("HOM bunching removes the split pair") {
  const ModeLabel s{"signal", 0};
  const ModeLabel i{"idler", 0};
  const FockState bunched = hom_bunch(pdc_pair_state(0.05, s, i), s, i);
  const ModeLabel gs[] = {s};
  const ModeLabel gi[] = {i};
  const auto joint = joint_number_distribution(bunched, gs, gi);
  CHECK(joint[1][1] < 1e-12);
  CHECK(std::abs(bunched.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("matched_alpha minimizes the equal-time coincidence") {
  for (const double xi : {0.01, 0.04}) {
    const Complex alpha = matched_alpha(xi);
    CHECK(std::arg(alpha) == doctest::Approx(kLockPhase));
    // Independent grid search on the exact coincidence probability.
    double best_m = 0.0;
    double best_p = 1.0;
    const double lo = 0.8 * std::sqrt(xi);
    const double hi = 1.2 * std::sqrt(xi);
    constexpr int kGrid = 400;
    for (int k = 0; k <= kGrid; ++k) {
      const double m = lo + (hi - lo) * k / kGrid;
      const double p = matched_coincidence_probability(xi, std::polar(m, kLockPhase), std::numbers::pi);
      if (p < best_p) {
        best_p = p;
        best_m = m;
      }
    }
    CHECK(std::abs(std::abs(alpha) - best_m) <= 1.5 * (hi - lo) / kGrid);
    const double p_alpha = matched_coincidence_probability(xi, alpha, std::numbers::pi);
    CHECK(p_alpha <= best_p * (1.0 + 1e-6) + 1e-15);
  }
}

TEST_CASE("matched amplitude is close to sqrt(xi) for weak pairs") {
  const double xi = 0.01;
  CHECK(std::norm(matched_alpha(xi)) / xi == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("matched coincidence is symmetric in the phase") {
  const Complex alpha = matched_alpha(0.04);
  const double p1 = matched_coincidence_probability(0.04, alpha, 0.7);
  const double p2 = matched_coincidence_probability(0.04, alpha, -0.7);
  CHECK(p1 == doctest::Approx(p2).epsilon(1e-9));
  CHECK(matched_coincidence_probability(0.04, alpha, 0.0) > 100.0 * matched_coincidence_probability(0.04, alpha, std::numbers::pi));
}

TEST_CASE("source parameter validation") {
  SourceParams p;
  p.alpha = Complex(0.2, 0.0);
  CHECK_NOTHROW(p.validate());
  p.xi = 0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.xi = 0.04;
  p.overlap = 1.01;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.overlap = 1.0;
  p.alpha = Complex(0.6, 0.0);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);

  PulseTrainConfig t;
  CHECK(t.period() == doctest::Approx(13.158e-9).epsilon(1e-4));
  t.n_pulses = 0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("pulse train phases") {
  PulseTrainConfig cfg;
  cfg.n_pulses = 20000;
  RngStream rng(1);
  for (double phase : pulse_train_phases(cfg, rng)) CHECK(phase == 0.0);
  cfg.locked_phase_jitter = 0.1;
  const auto phases = pulse_train_phases(cfg, rng);
  double sum = 0.0;
  double sq = 0.0;
  for (double p : phases) {
    sum += p;
    sq += p * p;
  }
  const double n = static_cast<double>(phases.size());
  CHECK(std::abs(sum / n) < 5.0 * 0.1 / std::sqrt(n));
  CHECK(std::sqrt(sq / n) == doctest::Approx(0.1).epsilon(0.05));
}
