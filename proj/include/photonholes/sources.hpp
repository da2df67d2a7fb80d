#pragma once

#include <cstdint>
#include <numbers>
#include <vector>

#include "photonholes/fock_state.hpp"

namespace photonholes {

/// Carrier phase given to the coherent amplitude by `matched_alpha`. It offsets
/// the i picked up by the bunched pair in the HOM coupler so that phi = 0 is the
/// constructive point and phi = pi the photon-hole point.
inline constexpr double kLockPhase = std::numbers::pi / 4.0;

struct SourceParams {
  Complex alpha{};       ///< coherent amplitude per pulse
  double xi = 0.04;      ///< PDC pair amplitude per pulse
  double phi = std::numbers::pi;  ///< relative phase of the two two-photon amplitudes
  double overlap = 1.0;  ///< mode overlap of the two two-photon amplitudes

  void validate() const;
};

struct PulseTrainConfig {
  double rep_rate_hz = 76e6;
  std::int64_t n_pulses = 1'000'000;
  /// Standard deviation of the pulse-to-pulse carrier phase error, radians.
  double locked_phase_jitter = 0.0;

  double period() const { return 1.0 / rep_rate_hz; }
  void validate() const;
};

/// Largest tail mass a truncated coherent state may discard.
inline constexpr double kCoherentTailTolerance = 1e-8;

FockState coherent_pulse(Complex alpha, ModeLabel mode, int truncation = FockState::kDefaultTruncation);

/// Weak two-mode squeezed vacuum kept to second order:
/// (|0,0> + xi|1,1> + xi^2|2,2>) / sqrt(1 + xi^2 + xi^4).
FockState pdc_pair_state(double xi, ModeLabel signal, ModeLabel idler,
                         int truncation = FockState::kDefaultTruncation);

/// 50/50 coupler on the signal/idler pair (HOM bunching).
FockState hom_bunch(const FockState& state, const ModeLabel& signal, const ModeLabel& idler);

/// Coherent amplitude whose two-photon term cancels the bunched PDC pair at
/// phi = pi and unit overlap. The magnitude minimizes the exact equal-time
/// coincidence probability; to leading order |alpha|^2 = xi.
Complex matched_alpha(double xi);

/// Exact equal-time coincidence probability behind the mixer for a single
/// matched pulse (ideal detectors, unit overlap). Exposed for calibration.
double matched_coincidence_probability(double xi, Complex alpha, double phi);

/// Per-pulse carrier phases; all zero unless jitter is configured.
std::vector<double> pulse_train_phases(const PulseTrainConfig& cfg, RngStream& rng);

}  // namespace photonholes
