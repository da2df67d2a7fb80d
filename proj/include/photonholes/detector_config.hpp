#pragma once

#include <stdexcept>

namespace photonholes {

/// Threshold (non-number-resolving) single-photon detector.
struct DetectorConfig {
  double efficiency = 1.0;
  /// Probability of a dark click per pulse window.
  double dark_prob = 0.0;
  /// Gaussian timing jitter, seconds.
  double jitter_sigma = 300e-12;

  void validate() const {
    if (!(efficiency >= 0.0 && efficiency <= 1.0))
      throw std::invalid_argument("detector efficiency must lie in [0,1]");
    if (!(dark_prob >= 0.0 && dark_prob <= 1.0))
      throw std::invalid_argument("detector dark_prob must lie in [0,1]");
    if (!(jitter_sigma >= 0.0)) throw std::invalid_argument("detector jitter_sigma must be >= 0");
  }
};

inline DetectorConfig ideal_detector() { return DetectorConfig{1.0, 0.0, 0.0}; }

}  // namespace photonholes
