#include "photonholes/sources.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "photonholes/ports.hpp"

namespace photonholes {

namespace {
constexpr double kMaxXi = 0.1;
constexpr double kMaxAlphaSq = 0.25;
}  // namespace

void SourceParams::validate() const {
  if (!(xi >= 0.0 && xi < kMaxXi)) throw std::invalid_argument("xi must lie in [0, 0.1)");
  if (!(std::norm(alpha) <= kMaxAlphaSq)) throw std::invalid_argument("|alpha|^2 must not exceed 0.25");
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw std::invalid_argument("overlap must lie in [0,1]");
  if (!std::isfinite(phi)) throw std::invalid_argument("phi must be finite");
}

void PulseTrainConfig::validate() const {
  if (!(rep_rate_hz > 0.0)) throw std::invalid_argument("rep_rate must be positive");
  if (n_pulses < 1) throw std::invalid_argument("n_pulses must be at least 1");
  if (!(locked_phase_jitter >= 0.0)) throw std::invalid_argument("phase jitter must be non-negative");
}

FockState coherent_pulse(Complex alpha, ModeLabel mode, int truncation) {
  const double mean = std::norm(alpha);
  AmplitudeMap amps;
  double kept = 0.0;
  Complex term{std::exp(-mean / 2.0), 0.0};  // e^{-|a|^2/2} a^n / sqrt(n!)
  for (int n = 0; n <= truncation; ++n) {
    if (n > 0) term *= alpha / std::sqrt(static_cast<double>(n));
    kept += std::norm(term);
    Occupation occ;
    occ.set(0, n);
    amps.emplace(occ, term);
  }
  const double tail = 1.0 - kept;
  if (tail > kCoherentTailTolerance) {
    throw FockError("coherent state |alpha|=" + std::to_string(std::abs(alpha)) +
                    " loses " + std::to_string(tail) + " above truncation " +
                    std::to_string(truncation) + "; increase the truncation");
  }
  return FockState({std::move(mode)}, truncation, std::move(amps)).normalized();
}

FockState pdc_pair_state(double xi, ModeLabel signal, ModeLabel idler, int truncation) {
  if (!(xi >= 0.0 && xi < kMaxXi)) throw std::invalid_argument("xi must lie in [0, 0.1)");
  if (signal == idler) throw FockError("signal and idler must be distinct modes");
  if (truncation < 2) throw FockError("pair state needs truncation >= 2");
  AmplitudeMap amps;
  const double norm = std::sqrt(1.0 + xi * xi + xi * xi * xi * xi);
  double coefficient = 1.0;
  for (int n = 0; n <= 2; ++n) {
    const int counts[] = {n, n};
    amps.emplace(Occupation(counts), Complex{coefficient / norm, 0.0});
    coefficient *= xi;
  }
  return FockState({std::move(signal), std::move(idler)}, truncation, std::move(amps));
}

FockState hom_bunch(const FockState& state, const ModeLabel& signal, const ModeLabel& idler) {
  return apply_beam_splitter(state, signal, idler, 0.5);
}

double matched_coincidence_probability(double xi, Complex alpha, double phi) {
  using namespace ports;
  const auto upper = mode(kUpperIn);
  const auto lower = mode(kLowerIn);
  FockState pairs = hom_bunch(pdc_pair_state(xi, upper, mode(kHomDiscard), kMixerTruncation), upper,
                              mode(kHomDiscard));
  FockState joint = tensor(pairs, coherent_pulse(alpha, lower, kMixerTruncation));
  joint = apply_phase(joint, lower, phi / 2.0);
  joint = apply_beam_splitter(joint, upper, lower, 0.5);
  return joint_click_probabilities(joint, upper, lower, ideal_detector()).p_both;
}

Complex matched_alpha(double xi) {
  if (!(xi >= 0.0 && xi < kMaxXi)) throw std::invalid_argument("xi must lie in [0, 0.1)");
  if (xi == 0.0) return {};
  const double guess = std::sqrt(xi);
  auto objective = [xi](double magnitude) {
    return matched_coincidence_probability(xi, std::polar(magnitude, kLockPhase), std::numbers::pi);
  };
  const auto [magnitude, value] =
      boost::math::tools::brent_find_minima(objective, 0.8 * guess, 1.2 * guess, 40);
  (void)value;
  return std::polar(magnitude, kLockPhase);
}

std::vector<double> pulse_train_phases(const PulseTrainConfig& cfg, RngStream& rng) {
  cfg.validate();
  std::vector<double> phases(static_cast<std::size_t>(cfg.n_pulses), 0.0);
  if (cfg.locked_phase_jitter > 0.0) {
    std::normal_distribution<double> noise(0.0, cfg.locked_phase_jitter);
    for (auto& p : phases) p = noise(rng);
  }
  return phases;
}

}  // namespace photonholes
