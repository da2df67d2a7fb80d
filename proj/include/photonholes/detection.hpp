#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "photonholes/detector_config.hpp"
#include "photonholes/fock_state.hpp"
#include "photonholes/sources.hpp"

namespace photonholes {

/// Binned start-stop delays t_B - t_A. Bins tile [-window, +window] exactly.
class TacHistogram {
 public:
  TacHistogram(double bin_width, double window);

  double bin_width() const { return bin_width_; }
  double window() const { return window_; }
  std::size_t bin_count() const { return counts_.size(); }
  double bin_start(std::size_t i) const;
  double bin_end(std::size_t i) const { return bin_start(i + 1); }
  double bin_center(std::size_t i) const { return bin_start(i) + 0.5 * bin_width_; }

  const std::vector<std::int64_t>& counts() const { return counts_; }
  std::int64_t n_starts() const { return n_starts_; }
  std::int64_t total() const;

  /// Adds one count; delays outside [-window, window] are ignored. Returns
  /// whether the delay was inside.
  bool add(double delay, std::int64_t count = 1);
  void set_count(std::size_t bin, std::int64_t count);
  void add_starts(std::int64_t n) { n_starts_ += n; }

  bool same_geometry(const TacHistogram& other) const;
  /// Bin-wise sum; throws on geometry mismatch.
  TacHistogram& merge(const TacHistogram& other);

  /// Counts integrated over +-period/2 around each multiple of `period` that
  /// fits inside the window, ordered from the most negative delay.
  std::vector<std::pair<int, std::int64_t>> peak_counts(double period) const;

  friend bool operator==(const TacHistogram&, const TacHistogram&) = default;

 private:
  double bin_width_;
  double window_;
  std::vector<std::int64_t> counts_;
  std::int64_t n_starts_ = 0;
};

TacHistogram merge(TacHistogram first, const TacHistogram& second);

/// Pulse indices at which each detector clicked.
struct ClickRecord {
  std::int64_t n_pulses = 0;
  std::vector<std::int64_t> clicks_a;
  std::vector<std::int64_t> clicks_b;
};

/// Samples per-pulse click pairs from the joint photon-number distribution of
/// two detector mode groups, followed by efficiency thinning and dark counts.
class ClickSampler {
 public:
  ClickSampler(const FockState& state, std::span<const ModeLabel> group_a,
               std::span<const ModeLabel> group_b, const DetectorConfig& det);

  std::pair<bool, bool> sample(RngStream& rng) const;
  const DetectorConfig& detector() const { return det_; }

 private:
  DetectorConfig det_;
  std::vector<std::pair<int, int>> outcomes_;
  std::vector<double> cumulative_;
};

std::pair<bool, bool> sample_pulse_clicks(const FockState& state, const ModeLabel& out_a,
                                          const ModeLabel& out_b, const DetectorConfig& det,
                                          RngStream& rng);

/// Independent stream for batch `index` of a run seeded with `seed`.
RngStream derive_stream(std::uint64_t seed, std::uint64_t index);

inline constexpr std::int64_t kPulseBatch = 1 << 16;

/// Simulates n_pulses i.i.d. pulses in batches of kPulseBatch, each with its
/// own stream, so the record does not depend on how batches are scheduled.
ClickRecord simulate_clicks(const ClickSampler& sampler, std::int64_t n_pulses, std::uint64_t seed);

/// All A/B click pairs within the window are binned at (j - i) T_rep plus
/// Gaussian jitter of both detectors.
TacHistogram accumulate_coincidences(const ClickRecord& events, const PulseTrainConfig& train,
                                     TacHistogram hist, const DetectorConfig& det, RngStream& rng);

}  // namespace photonholes
