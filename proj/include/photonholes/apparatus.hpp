#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <span>

#include "photonholes/fock_state.hpp"
#include "photonholes/ports.hpp"
#include "photonholes/sources.hpp"

namespace photonholes {

/// The primary 3 dB fiber coupler.
struct MixerConfig {
  static constexpr double kTransmissivity = 0.5;
  double phi = std::numbers::pi;
  double overlap = 1.0;
};

/// Joint state behind the primary mixer. The lower input is split into a
/// component matched to the upper input (amplitude sqrt(overlap)) and an
/// orthogonal one; phi is applied to the lower input as a phase phi/2 per
/// photon so that its two-photon amplitude rotates by phi. Output modes are
/// out-A, out-A-orth, out-B, out-B-orth plus any spectator modes of the inputs.
FockState primary_mix(const FockState& upper, const FockState& lower, const MixerConfig& cfg);

/// One pulse of the full source chain: PDC pair -> HOM bunching -> mixer with
/// the coherent pulse. `carrier_phase` is the laser phase of this pulse; the
/// pump of the PDC follows at twice that phase.
FockState photon_hole_state(const SourceParams& params, int pulse = 0, double carrier_phase = 0.0,
                            int truncation = ports::kMixerTruncation);

/// Linear loss as a quantum trajectory: split to a fresh ancilla and measure it.
FockState attenuate(const FockState& state, const ModeLabel& mode, double transmission, RngStream& rng);

struct TpaResult {
  FockState state;
  double removed_mass;
};

/// Strong two-photon-absorption limit: removes every component with at least
/// one photon in each of the two modes and renormalizes.
TpaResult idealized_tpa(const FockState& joint, const ModeLabel& a, const ModeLabel& b);

struct FransonConfig {
  static constexpr double kArmTransmissivity = 0.5;
  int delay_pulses = 1;   ///< long - short path difference in pulse periods
  double phase_a = 0.0;   ///< long-arm phase, interferometer on port A
  double phase_b = 0.0;   ///< long-arm phase, interferometer on port B

  void validate() const;
};

/// Exact both-click probability per pulse slot at the far detectors behind two
/// unbalanced interferometers. With phase jitter the result is averaged over
/// (up to 64) slots using carrier phases drawn from `seed`.
double franson_coincidence_rate(const SourceParams& sources, const FransonConfig& f,
                                const PulseTrainConfig& train, std::uint64_t seed = 0);

struct FransonFringe {
  double mean_rate;
  double visibility;
  /// phi0 in R = R0 [1 - V cos(phase_a - phase_b + phi0)]
  double phase_offset;
  double max_relative_residual;
};

/// Scans phase_a over `points` equally spaced values with phase_b fixed and
/// fits the fringe law.
FransonFringe calibrate_franson(const SourceParams& sources, const FransonConfig& f_base,
                                const PulseTrainConfig& train, int points = 16);

struct PhasePair {
  double phase_a;
  double phase_b;
};

/// Correlation from the four rates with each side's phase optionally shifted by pi.
double franson_correlation(const SourceParams& sources, const FransonConfig& f_base,
                           const PulseTrainConfig& train, PhasePair setting);

/// Settings (a,b), (a,b'), (a',b), (a',b') maximizing S for fringe offset phi0.
std::array<PhasePair, 4> optimal_chsh_settings(double phase_offset);

/// S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.
double chsh_S(const SourceParams& sources, const FransonConfig& f_base, const PulseTrainConfig& train,
              std::span<const PhasePair, 4> settings);

}  // namespace photonholes
