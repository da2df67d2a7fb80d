#pragma once

// Sparse pure states on a truncated multimode bosonic Fock space together with
// the passive linear-optical operations and measurements used by the rest of
// the simulator.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "photonholes/detector_config.hpp"

namespace photonholes {

using Complex = std::complex<double>;

/// All randomness flows through explicitly passed engines of this type.
using RngStream = std::mt19937_64;

class FockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a passive element pushes more than `kOverflowTolerance` of
/// probability mass past the per-mode photon cutoff.
class TruncationOverflow : public FockError {
 public:
  TruncationOverflow(const std::string& what, double lost_mass)
      : FockError(what), lost_mass_(lost_mass) {}
  double lost_mass() const { return lost_mass_; }

 private:
  double lost_mass_;
};

struct ModeLabel {
  std::string path;
  int pulse = 0;

  friend auto operator<=>(const ModeLabel&, const ModeLabel&) = default;
  std::string str() const { return path + "#" + std::to_string(pulse); }
};

/// Occupation numbers packed four bits per mode.
class Occupation {
 public:
  static constexpr std::size_t kMaxModes = 16;
  static constexpr int kMaxPerMode = 15;

  Occupation() = default;
  explicit Occupation(std::span<const int> counts);

  int operator[](std::size_t mode) const {
    return static_cast<int>((bits_ >> (4 * mode)) & 0xFu);
  }
  void set(std::size_t mode, int n) {
    bits_ &= ~(std::uint64_t{0xF} << (4 * mode));
    bits_ |= std::uint64_t(n) << (4 * mode);
  }
  int total(std::size_t n_modes) const;
  std::vector<int> to_vector(std::size_t n_modes) const;
  std::uint64_t bits() const { return bits_; }

  friend bool operator==(Occupation, Occupation) = default;

 private:
  std::uint64_t bits_ = 0;
};

struct OccupationHash {
  std::size_t operator()(Occupation o) const noexcept {
    // splitmix64 finalizer
    std::uint64_t z = o.bits() + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};

using AmplitudeMap = std::unordered_map<Occupation, Complex, OccupationHash>;

/// Immutable value type. Absent occupations carry zero amplitude.
class FockState {
 public:
  static constexpr double kDefaultPrune = 1e-14;
  static constexpr double kOverflowTolerance = 1e-9;
  static constexpr int kDefaultTruncation = 4;

  FockState(std::vector<ModeLabel> modes, int truncation, AmplitudeMap amplitudes,
            double prune_threshold = kDefaultPrune);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  std::size_t mode_count() const { return modes_.size(); }
  int truncation() const { return truncation_; }
  double prune_threshold() const { return prune_; }
  const AmplitudeMap& amplitudes() const { return amplitudes_; }
  std::size_t size() const { return amplitudes_.size(); }

  bool has_mode(const ModeLabel& m) const;
  std::size_t mode_index(const ModeLabel& m) const;

  Complex amplitude(Occupation occ) const;
  Complex amplitude(std::span<const int> counts) const;
  double norm_squared() const;
  FockState normalized() const;

 private:
  std::vector<ModeLabel> modes_;
  int truncation_;
  double prune_;
  AmplitudeMap amplitudes_;
};

FockState make_vacuum(std::vector<ModeLabel> modes, int truncation);
FockState make_number_state(std::vector<ModeLabel> modes, int truncation,
                            std::span<const int> counts);

/// Product state over the union of the two (disjoint) mode sets.
FockState tensor(const FockState& first, const FockState& second);
FockState add_vacuum_mode(const FockState& state, ModeLabel mode);
FockState rename_mode(const FockState& state, const ModeLabel& from, ModeLabel to);

/// Two-mode passive unitary: a† -> sqrt(t) a† + i sqrt(1-t) e^{i phase} b†,
/// b† -> i sqrt(1-t) e^{-i phase} a† + sqrt(t) b†.
FockState apply_beam_splitter(const FockState& state, const ModeLabel& a, const ModeLabel& b,
                              double transmissivity, double extra_phase = 0.0);
FockState apply_phase(const FockState& state, const ModeLabel& mode, double phi);

struct Measurement {
  int outcome;
  FockState collapsed;
  double probability;
};

Measurement measure_mode(const FockState& state, const ModeLabel& mode, RngStream& rng);

/// Projects `mode` onto |n> and renormalizes; optionally removes the mode,
/// which is then in a product state with the rest. Throws if P(n) == 0.
FockState project_mode(const FockState& state, const ModeLabel& mode, int n, bool drop_mode);

std::vector<double> number_distribution(const FockState& state, const ModeLabel& mode);
/// Distribution of the summed photon number of several modes, as seen by a
/// single detector covering all of them.
std::vector<double> number_distribution(const FockState& state, std::span<const ModeLabel> group);

/// joint[nA][nB] for the summed photon numbers of two detector groups.
std::vector<std::vector<double>> joint_number_distribution(const FockState& state,
                                                           std::span<const ModeLabel> group_a,
                                                           std::span<const ModeLabel> group_b);

struct ClickProbabilities {
  double p_both = 0.0;
  double p_a_only = 0.0;
  double p_b_only = 0.0;
  double p_none = 0.0;

  double p_a() const { return p_both + p_a_only; }
  double p_b() const { return p_both + p_b_only; }
};

/// Threshold-detector click probability for n incident photons.
double click_probability(int n, const DetectorConfig& det);

ClickProbabilities joint_click_probabilities(const FockState& state, const ModeLabel& mode_a,
                                             const ModeLabel& mode_b, const DetectorConfig& det);
ClickProbabilities joint_click_probabilities(const FockState& state,
                                             std::span<const ModeLabel> group_a,
                                             std::span<const ModeLabel> group_b,
                                             const DetectorConfig& det);

/// <first|second>, matching modes by label. Both states must have the same mode set.
Complex inner_product(const FockState& first, const FockState& second);
/// max |a_k - b_k| over the union of supports, modes matched by label.
double max_amplitude_difference(const FockState& first, const FockState& second);

}  // namespace photonholes
