#include "photonholes/apparatus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "photonholes/analysis.hpp"

namespace photonholes {

namespace {

const ModeLabel& find_path(const FockState& state, const char* path, const char* role) {
  const ModeLabel* found = nullptr;
  for (const auto& m : state.modes()) {
    if (m.path != path) continue;
    if (found) throw FockError(std::string(role) + " state carries more than one " + path + " mode");
    found = &m;
  }
  if (!found) throw FockError(std::string(role) + " state has no " + path + " mode");
  return *found;
}

constexpr int kMaxJitterSlots = 64;

}  // namespace

FockState primary_mix(const FockState& upper, const FockState& lower, const MixerConfig& cfg) {
  if (!(cfg.overlap >= 0.0 && cfg.overlap <= 1.0)) throw std::invalid_argument("overlap must lie in [0,1]");
  for (const auto& m : upper.modes())
    if (lower.has_mode(m)) throw FockError("mixer inputs share mode " + m.str());
  const ModeLabel u = find_path(upper, ports::kUpperIn, "upper");
  const ModeLabel l = find_path(lower, ports::kLowerIn, "lower");
  if (u.pulse != l.pulse) throw FockError("mixer inputs belong to different pulses");
  const int pulse = u.pulse;
  const ModeLabel u_orth{ports::kUpperOrth, pulse};
  const ModeLabel l_orth{ports::kLowerOrth, pulse};

  FockState joint = tensor(upper, lower);
  joint = apply_phase(joint, l, cfg.phi / 2.0);
  joint = add_vacuum_mode(add_vacuum_mode(joint, u_orth), l_orth);
  joint = apply_beam_splitter(joint, l, l_orth, cfg.overlap);
  joint = apply_beam_splitter(joint, u, l, MixerConfig::kTransmissivity);
  joint = apply_beam_splitter(joint, u_orth, l_orth, MixerConfig::kTransmissivity);
  joint = rename_mode(joint, u, {ports::kOutA, pulse});
  joint = rename_mode(joint, l, {ports::kOutB, pulse});
  joint = rename_mode(joint, u_orth, {ports::kOutAOrth, pulse});
  return rename_mode(joint, l_orth, {ports::kOutBOrth, pulse});
}

FockState photon_hole_state(const SourceParams& params, int pulse, double carrier_phase, int truncation) {
  params.validate();
  const ModeLabel upper{ports::kUpperIn, pulse};
  const ModeLabel discard{ports::kHomDiscard, pulse};
  FockState pairs = pdc_pair_state(params.xi, upper, discard, truncation);
  pairs = apply_phase(pairs, upper, 2.0 * carrier_phase);
  pairs = hom_bunch(pairs, upper, discard);
  const FockState laser =
      coherent_pulse(params.alpha * std::polar(1.0, carrier_phase), {ports::kLowerIn, pulse}, truncation);
  return primary_mix(pairs, laser, MixerConfig{params.phi, params.overlap});
}

FockState attenuate(const FockState& state, const ModeLabel& mode, double transmission, RngStream& rng) {
  if (!(transmission >= 0.0 && transmission <= 1.0))
    throw std::invalid_argument("transmission must lie in [0,1]");
  if (transmission == 1.0) return state;
  ModeLabel ancilla{"loss-ancilla:" + mode.path, mode.pulse};
  FockState split = apply_beam_splitter(add_vacuum_mode(state, ancilla), mode, ancilla, transmission);
  const Measurement m = measure_mode(split, ancilla, rng);
  return project_mode(m.collapsed, ancilla, m.outcome, true);
}

TpaResult idealized_tpa(const FockState& joint, const ModeLabel& a, const ModeLabel& b) {
  const std::size_t ia = joint.mode_index(a);
  const std::size_t ib = joint.mode_index(b);
  if (ia == ib) throw FockError("two-photon absorption needs two distinct modes");
  AmplitudeMap kept;
  double removed = 0.0;
  for (const auto& [occ, amp] : joint.amplitudes()) {
    if (occ[ia] >= 1 && occ[ib] >= 1) {
      removed += std::norm(amp);
    } else {
      kept.emplace(occ, amp);
    }
  }
  removed /= joint.norm_squared();
  double remaining = 0.0;
  for (const auto& [occ, amp] : kept) remaining += std::norm(amp);
  if (remaining <= joint.prune_threshold() * joint.prune_threshold())
    throw FockError("two-photon absorption removed the entire state");
  FockState out(joint.modes(), joint.truncation(), std::move(kept), joint.prune_threshold());
  return TpaResult{out.normalized(), removed};
}

void FransonConfig::validate() const {
  if (delay_pulses < 1) throw std::invalid_argument("delay_pulses must be at least 1");
  if (!std::isfinite(phase_a) || !std::isfinite(phase_b))
    throw std::invalid_argument("interferometer phases must be finite");
}

namespace {

// Both-click probability at slot `late` given the carrier phases of the early
// (late - k) and late pulses.
double slot_coincidence(const SourceParams& sources, const FransonConfig& f, double early_phase,
                        double late_phase) {
  FockState joint = tensor(photon_hole_state(sources, 0, early_phase), photon_hole_state(sources, 1, late_phase));
  struct Arm {
    const char* path;
    double phase;
  };
  const Arm arms[] = {{ports::kOutA, f.phase_a},
                      {ports::kOutAOrth, f.phase_a},
                      {ports::kOutB, f.phase_b},
                      {ports::kOutBOrth, f.phase_b}};
  for (const auto& arm : arms) {
    const ModeLabel early{arm.path, 0};
    const ModeLabel late{arm.path, 1};
    // The early pulse takes the long arm and meets the late pulse's short arm
    // on the output coupler.
    joint = apply_phase(joint, early, arm.phase);
    joint = apply_beam_splitter(joint, late, early, FransonConfig::kArmTransmissivity);
  }
  // Each coupler pair passes half of the recombined mode to the far detector;
  // the rest leaves by the unused ports, so it acts as 50% loss.
  const DetectorConfig far{FransonConfig::kArmTransmissivity, 0.0, 0.0};
  return joint_click_probabilities(joint, ports::detector_a(1), ports::detector_b(1), far).p_both;
}

}  // namespace

double franson_coincidence_rate(const SourceParams& sources, const FransonConfig& f,
                                const PulseTrainConfig& train, std::uint64_t seed) {
  f.validate();
  train.validate();
  if (train.n_pulses < f.delay_pulses + 1)
    throw std::invalid_argument("pulse train shorter than the interferometer delay");
  if (train.locked_phase_jitter == 0.0) return slot_coincidence(sources, f, 0.0, 0.0);

  PulseTrainConfig window = train;
  window.n_pulses = std::min<std::int64_t>(train.n_pulses, f.delay_pulses + kMaxJitterSlots);
  RngStream rng(seed);
  const auto phases = pulse_train_phases(window, rng);
  double sum = 0.0;
  std::size_t slots = 0;
  for (std::size_t j = static_cast<std::size_t>(f.delay_pulses); j < phases.size(); ++j, ++slots)
    sum += slot_coincidence(sources, f, phases[j - f.delay_pulses], phases[j]);
  return sum / static_cast<double>(slots);
}

FransonFringe calibrate_franson(const SourceParams& sources, const FransonConfig& f_base,
                                const PulseTrainConfig& train, int points) {
  if (points < 3) throw std::invalid_argument("fringe calibration needs at least 3 points");
  std::vector<double> phases(points), rates(points);
  for (int i = 0; i < points; ++i) {
    FransonConfig f = f_base;
    f.phase_a = f_base.phase_b + 2.0 * std::numbers::pi * i / points;
    phases[i] = f.phase_a - f.phase_b;
    rates[i] = franson_coincidence_rate(sources, f, train);
  }
  const FringeFit fit = fit_fringe(phases, rates);
  // R0 [1 + V cos(d + c)] == R0 [1 - V cos(d + c - pi)]
  const double offset = std::remainder(fit.phase_offset - std::numbers::pi, 2.0 * std::numbers::pi);
  return FransonFringe{fit.mean, fit.visibility, offset, fit.max_relative_residual};
}

double franson_correlation(const SourceParams& sources, const FransonConfig& f_base,
                           const PulseTrainConfig& train, PhasePair setting) {
  auto rate = [&](double shift_a, double shift_b) {
    FransonConfig f = f_base;
    f.phase_a = setting.phase_a + shift_a;
    f.phase_b = setting.phase_b + shift_b;
    return franson_coincidence_rate(sources, f, train);
  };
  constexpr double pi = std::numbers::pi;
  const double same = rate(0.0, 0.0) + rate(pi, pi);
  const double opposite = rate(pi, 0.0) + rate(0.0, pi);
  if (same + opposite <= 0.0) throw std::runtime_error("no coincidences at CHSH setting");
  return (same - opposite) / (same + opposite);
}

std::array<PhasePair, 4> optimal_chsh_settings(double phase_offset) {
  constexpr double pi = std::numbers::pi;
  const double a = -phase_offset;
  const double a_prime = pi / 2.0 - phase_offset;
  const double b = pi / 4.0;
  const double b_prime = 3.0 * pi / 4.0;
  return {PhasePair{a, b}, PhasePair{a, b_prime}, PhasePair{a_prime, b}, PhasePair{a_prime, b_prime}};
}

double chsh_S(const SourceParams& sources, const FransonConfig& f_base, const PulseTrainConfig& train,
              std::span<const PhasePair, 4> settings) {
  double e[4];
  for (int i = 0; i < 4; ++i) e[i] = franson_correlation(sources, f_base, train, settings[i]);
  return std::abs(e[0] - e[1] + e[2] + e[3]);
}

}  // namespace photonholes
