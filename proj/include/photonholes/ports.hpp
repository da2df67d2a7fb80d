#pragma once

#include <array>

#include "photonholes/fock_state.hpp"

namespace photonholes::ports {

// Mode paths shared by the source, mixer and interferometer stages.
inline constexpr const char* kUpperIn = "upper-in";
inline constexpr const char* kLowerIn = "lower-in";
inline constexpr const char* kHomDiscard = "hom-discard";
inline constexpr const char* kUpperOrth = "upper-in-orth";
inline constexpr const char* kLowerOrth = "lower-in-orth";
inline constexpr const char* kOutA = "out-A";
inline constexpr const char* kOutB = "out-B";
inline constexpr const char* kOutAOrth = "out-A-orth";
inline constexpr const char* kOutBOrth = "out-B-orth";

/// Truncation used for the joint states that pass through the primary mixer.
inline constexpr int kMixerTruncation = 6;

inline ModeLabel mode(const char* path, int pulse = 0) { return ModeLabel{path, pulse}; }

/// Modes seen by the detector on output port A (matched and orthogonal sub-modes).
inline std::array<ModeLabel, 2> detector_a(int pulse = 0) {
  return {mode(kOutA, pulse), mode(kOutAOrth, pulse)};
}
inline std::array<ModeLabel, 2> detector_b(int pulse = 0) {
  return {mode(kOutB, pulse), mode(kOutBOrth, pulse)};
}

}  // namespace photonholes::ports
