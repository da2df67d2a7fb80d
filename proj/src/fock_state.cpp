#include "photonholes/fock_state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

namespace photonholes {

namespace {

constexpr int kMaxTotal = 2 * Occupation::kMaxPerMode;

const std::array<double, kMaxTotal + 1>& factorials() {
  static const auto table = [] {
    std::array<double, kMaxTotal + 1> f{};
    f[0] = 1.0;
    for (int i = 1; i <= kMaxTotal; ++i) f[i] = f[i - 1] * i;
    return f;
  }();
  return table;
}

double binomial(int n, int k) {
  const auto& f = factorials();
  return f[n] / (f[k] * f[n - k]);
}

void prune(AmplitudeMap& amps, double threshold) {
  std::erase_if(amps, [threshold](const auto& kv) { return std::abs(kv.second) < threshold; });
}

double mass(const AmplitudeMap& amps) {
  double s = 0.0;
  for (const auto& [occ, amp] : amps) s += std::norm(amp);
  return s;
}

// Maps occupations of `from` into the mode order of `to` (same label set).
std::vector<std::size_t> mode_permutation(const FockState& from, const FockState& to) {
  if (from.mode_count() != to.mode_count())
    throw FockError("states are defined on different mode sets");
  std::vector<std::size_t> perm(from.mode_count());
  for (std::size_t i = 0; i < from.mode_count(); ++i) perm[i] = to.mode_index(from.modes()[i]);
  return perm;
}

Occupation permute(Occupation occ, std::span<const std::size_t> perm) {
  Occupation out;
  for (std::size_t i = 0; i < perm.size(); ++i) out.set(perm[i], occ[i]);
  return out;
}

std::vector<std::size_t> group_indices(const FockState& state, std::span<const ModeLabel> group) {
  if (group.empty()) throw FockError("detector mode group is empty");
  std::vector<std::size_t> idx;
  idx.reserve(group.size());
  for (const auto& m : group) idx.push_back(state.mode_index(m));
  return idx;
}

int group_count(Occupation occ, std::span<const std::size_t> idx) {
  int n = 0;
  for (auto i : idx) n += occ[i];
  return n;
}

}  // namespace

Occupation::Occupation(std::span<const int> counts) {
  if (counts.size() > kMaxModes) throw FockError("too many modes for packed occupation");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0 || counts[i] > kMaxPerMode)
      throw FockError("occupation number out of packable range");
    set(i, counts[i]);
  }
}

int Occupation::total(std::size_t n_modes) const {
  int n = 0;
  for (std::size_t i = 0; i < n_modes; ++i) n += (*this)[i];
  return n;
}

std::vector<int> Occupation::to_vector(std::size_t n_modes) const {
  std::vector<int> v(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) v[i] = (*this)[i];
  return v;
}

FockState::FockState(std::vector<ModeLabel> modes, int truncation, AmplitudeMap amplitudes,
                     double prune_threshold)
    : modes_(std::move(modes)),
      truncation_(truncation),
      prune_(prune_threshold),
      amplitudes_(std::move(amplitudes)) {
  if (modes_.empty()) throw FockError("a state needs at least one mode");
  if (modes_.size() > Occupation::kMaxModes)
    throw FockError("at most " + std::to_string(Occupation::kMaxModes) + " modes are supported");
  if (truncation_ < 1 || truncation_ > Occupation::kMaxPerMode)
    throw FockError("truncation must lie in [1, " + std::to_string(Occupation::kMaxPerMode) + "]");
  if (prune_ < 0.0) throw FockError("prune threshold must be non-negative");
  std::set<ModeLabel> seen;
  for (const auto& m : modes_) {
    if (m.pulse < 0) throw FockError("negative pulse index on mode " + m.path);
    if (!seen.insert(m).second) throw FockError("duplicate mode label " + m.str());
  }
  for (const auto& [occ, amp] : amplitudes_) {
    for (std::size_t i = 0; i < modes_.size(); ++i)
      if (occ[i] > truncation_) throw FockError("occupation exceeds truncation on " + modes_[i].str());
    if (modes_.size() < Occupation::kMaxModes && (occ.bits() >> (4 * modes_.size())) != 0)
      throw FockError("occupation addresses a mode outside the state");
  }
  prune(amplitudes_, prune_);
}

bool FockState::has_mode(const ModeLabel& m) const {
  return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
}

std::size_t FockState::mode_index(const ModeLabel& m) const {
  auto it = std::find(modes_.begin(), modes_.end(), m);
  if (it == modes_.end()) throw FockError("unknown mode " + m.str());
  return static_cast<std::size_t>(it - modes_.begin());
}

Complex FockState::amplitude(Occupation occ) const {
  auto it = amplitudes_.find(occ);
  return it == amplitudes_.end() ? Complex{} : it->second;
}

Complex FockState::amplitude(std::span<const int> counts) const {
  if (counts.size() != modes_.size()) throw FockError("occupation length does not match mode count");
  return amplitude(Occupation(counts));
}

double FockState::norm_squared() const { return mass(amplitudes_); }

FockState FockState::normalized() const {
  const double n = std::sqrt(norm_squared());
  if (n == 0.0) throw FockError("cannot normalize the zero vector");
  AmplitudeMap out = amplitudes_;
  for (auto& [occ, amp] : out) amp /= n;
  return FockState(modes_, truncation_, std::move(out), prune_);
}

FockState make_vacuum(std::vector<ModeLabel> modes, int truncation) {
  AmplitudeMap amps;
  amps.emplace(Occupation{}, Complex{1.0, 0.0});
  return FockState(std::move(modes), truncation, std::move(amps));
}

FockState make_number_state(std::vector<ModeLabel> modes, int truncation,
                            std::span<const int> counts) {
  if (counts.size() != modes.size()) throw FockError("occupation length does not match mode count");
  AmplitudeMap amps;
  amps.emplace(Occupation(counts), Complex{1.0, 0.0});
  return FockState(std::move(modes), truncation, std::move(amps));
}

FockState tensor(const FockState& first, const FockState& second) {
  std::vector<ModeLabel> modes = first.modes();
  modes.insert(modes.end(), second.modes().begin(), second.modes().end());
  if (modes.size() > Occupation::kMaxModes) throw FockError("tensor product exceeds mode capacity");
  const auto shift = 4 * first.mode_count();
  AmplitudeMap amps;
  amps.reserve(first.size() * second.size());
  const double threshold = std::min(first.prune_threshold(), second.prune_threshold());
  for (const auto& [o1, a1] : first.amplitudes()) {
    for (const auto& [o2, a2] : second.amplitudes()) {
      const Complex a = a1 * a2;
      if (std::abs(a) < threshold) continue;
      Occupation occ;
      std::uint64_t bits = o1.bits() | (o2.bits() << shift);
      for (std::size_t i = 0; i < modes.size(); ++i) occ.set(i, static_cast<int>((bits >> (4 * i)) & 0xF));
      amps.emplace(occ, a);
    }
  }
  return FockState(std::move(modes), std::max(first.truncation(), second.truncation()),
                   std::move(amps), threshold);
}

FockState add_vacuum_mode(const FockState& state, ModeLabel mode) {
  return tensor(state, make_vacuum({std::move(mode)}, state.truncation()));
}

FockState rename_mode(const FockState& state, const ModeLabel& from, ModeLabel to) {
  auto modes = state.modes();
  modes[state.mode_index(from)] = std::move(to);
  return FockState(std::move(modes), state.truncation(), state.amplitudes(), state.prune_threshold());
}

FockState apply_beam_splitter(const FockState& state, const ModeLabel& a, const ModeLabel& b,
                              double transmissivity, double extra_phase) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0))
    throw FockError("beam splitter transmissivity must lie in [0,1]");
  const std::size_t ia = state.mode_index(a);
  const std::size_t ib = state.mode_index(b);
  if (ia == ib) throw FockError("beam splitter needs two distinct modes");

  const Complex tau{std::sqrt(transmissivity), 0.0};
  const double r = std::sqrt(1.0 - transmissivity);
  const Complex rho = Complex{0.0, r} * std::polar(1.0, extra_phase);
  const Complex rho_p = Complex{0.0, r} * std::polar(1.0, -extra_phase);
  const int cutoff = state.truncation();
  const auto& fact = factorials();

  // Output coefficients for |na, nb>, indexed by photons p leaving in mode a.
  const int n_max = Occupation::kMaxPerMode;
  std::vector<std::vector<Complex>> cache((n_max + 1) * (n_max + 1));
  auto coefficients = [&](int na, int nb) -> const std::vector<Complex>& {
    auto& c = cache[na * (n_max + 1) + nb];
    if (!c.empty()) return c;
    const int total = na + nb;
    c.assign(total + 1, Complex{});
    for (int k = 0; k <= na; ++k) {
      const Complex ak = binomial(na, k) * std::pow(tau, k) * std::pow(rho, na - k);
      for (int l = 0; l <= nb; ++l) {
        const Complex bl = binomial(nb, l) * std::pow(rho_p, l) * std::pow(tau, nb - l);
        c[k + l] += ak * bl;
      }
    }
    const double inv = 1.0 / std::sqrt(fact[na] * fact[nb]);
    for (int p = 0; p <= total; ++p) c[p] *= std::sqrt(fact[p] * fact[total - p]) * inv;
    return c;
  };

  AmplitudeMap out;
  out.reserve(state.size() * 2);
  AmplitudeMap overflow;
  for (const auto& [occ, amp] : state.amplitudes()) {
    const int na = occ[ia];
    const int nb = occ[ib];
    const auto& coef = coefficients(na, nb);
    const int total = na + nb;
    for (int p = 0; p <= total; ++p) {
      if (coef[p] == Complex{}) continue;
      Occupation o = occ;
      if (p > cutoff || total - p > cutoff) {
        // Keep the true occupation so coherent contributions sum correctly.
        o.set(ia, std::min(p, Occupation::kMaxPerMode));
        o.set(ib, std::min(total - p, Occupation::kMaxPerMode));
        overflow[o] += amp * coef[p];
        continue;
      }
      o.set(ia, p);
      o.set(ib, total - p);
      out[o] += amp * coef[p];
    }
  }
  const double lost = mass(overflow);
  if (lost > FockState::kOverflowTolerance) {
    throw TruncationOverflow("beam splitter on " + a.str() + "/" + b.str() + " pushes " +
                                 std::to_string(lost) + " probability past truncation " +
                                 std::to_string(cutoff),
                             lost);
  }
  prune(out, state.prune_threshold());
  FockState result(state.modes(), cutoff, std::move(out), state.prune_threshold());
  return lost > 0.0 ? result.normalized() : result;
}

FockState apply_phase(const FockState& state, const ModeLabel& mode, double phi) {
  const std::size_t i = state.mode_index(mode);
  AmplitudeMap out = state.amplitudes();
  for (auto& [occ, amp] : out) amp *= std::polar(1.0, phi * occ[i]);
  return FockState(state.modes(), state.truncation(), std::move(out), state.prune_threshold());
}

std::vector<double> number_distribution(const FockState& state, const ModeLabel& mode) {
  const ModeLabel group[] = {mode};
  return number_distribution(state, group);
}

std::vector<double> number_distribution(const FockState& state, std::span<const ModeLabel> group) {
  const auto idx = group_indices(state, group);
  std::vector<double> dist(idx.size() * state.truncation() + 1, 0.0);
  for (const auto& [occ, amp] : state.amplitudes()) dist[group_count(occ, idx)] += std::norm(amp);
  return dist;
}

std::vector<std::vector<double>> joint_number_distribution(const FockState& state,
                                                           std::span<const ModeLabel> group_a,
                                                           std::span<const ModeLabel> group_b) {
  const auto ia = group_indices(state, group_a);
  const auto ib = group_indices(state, group_b);
  for (auto i : ia)
    if (std::find(ib.begin(), ib.end(), i) != ib.end())
      throw FockError("detector groups overlap on mode " + state.modes()[i].str());
  std::vector<std::vector<double>> joint(ia.size() * state.truncation() + 1,
                                         std::vector<double>(ib.size() * state.truncation() + 1, 0.0));
  for (const auto& [occ, amp] : state.amplitudes())
    joint[group_count(occ, ia)][group_count(occ, ib)] += std::norm(amp);
  return joint;
}

double click_probability(int n, const DetectorConfig& det) {
  const double p_photon = 1.0 - std::pow(1.0 - det.efficiency, n);
  return 1.0 - (1.0 - p_photon) * (1.0 - det.dark_prob);
}

ClickProbabilities joint_click_probabilities(const FockState& state, const ModeLabel& mode_a,
                                             const ModeLabel& mode_b, const DetectorConfig& det) {
  const ModeLabel ga[] = {mode_a};
  const ModeLabel gb[] = {mode_b};
  return joint_click_probabilities(state, ga, gb, det);
}

ClickProbabilities joint_click_probabilities(const FockState& state,
                                             std::span<const ModeLabel> group_a,
                                             std::span<const ModeLabel> group_b,
                                             const DetectorConfig& det) {
  if (!(det.efficiency >= 0.0 && det.efficiency <= 1.0))
    throw FockError("detector efficiency must lie in [0,1]");
  if (!(det.dark_prob >= 0.0 && det.dark_prob <= 1.0))
    throw FockError("dark-count probability must lie in [0,1]");
  const auto joint = joint_number_distribution(state, group_a, group_b);
  ClickProbabilities out;
  for (std::size_t na = 0; na < joint.size(); ++na) {
    const double ca = click_probability(static_cast<int>(na), det);
    for (std::size_t nb = 0; nb < joint[na].size(); ++nb) {
      const double p = joint[na][nb];
      if (p == 0.0) continue;
      const double cb = click_probability(static_cast<int>(nb), det);
      out.p_both += p * ca * cb;
      out.p_a_only += p * ca * (1.0 - cb);
      out.p_b_only += p * (1.0 - ca) * cb;
      out.p_none += p * (1.0 - ca) * (1.0 - cb);
    }
  }
  return out;
}

Measurement measure_mode(const FockState& state, const ModeLabel& mode, RngStream& rng) {
  const auto dist = number_distribution(state, mode);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng) * std::accumulate(dist.begin(), dist.end(), 0.0);
  int outcome = 0;
  double acc = 0.0;
  for (std::size_t n = 0; n < dist.size(); ++n) {
    if (dist[n] == 0.0) continue;
    outcome = static_cast<int>(n);
    acc += dist[n];
    if (u < acc) break;
  }
  return Measurement{outcome, project_mode(state, mode, outcome, false), dist[outcome]};
}

FockState project_mode(const FockState& state, const ModeLabel& mode, int n, bool drop_mode) {
  const std::size_t i = state.mode_index(mode);
  AmplitudeMap out;
  std::vector<ModeLabel> modes = state.modes();
  if (drop_mode) modes.erase(modes.begin() + static_cast<std::ptrdiff_t>(i));
  for (const auto& [occ, amp] : state.amplitudes()) {
    if (occ[i] != n) continue;
    if (!drop_mode) {
      out.emplace(occ, amp);
      continue;
    }
    Occupation o;
    for (std::size_t k = 0, j = 0; k < state.mode_count(); ++k)
      if (k != i) o.set(j++, occ[k]);
    out.emplace(o, amp);
  }
  if (mass(out) == 0.0)
    throw FockError("projection of " + mode.str() + " onto n=" + std::to_string(n) + " has zero probability");
  return FockState(std::move(modes), state.truncation(), std::move(out), state.prune_threshold())
      .normalized();
}

Complex inner_product(const FockState& first, const FockState& second) {
  const auto perm = mode_permutation(second, first);
  Complex s{};
  for (const auto& [occ, amp] : second.amplitudes())
    s += std::conj(first.amplitude(permute(occ, perm))) * amp;
  return s;
}

double max_amplitude_difference(const FockState& first, const FockState& second) {
  const auto perm = mode_permutation(second, first);
  AmplitudeMap diff = first.amplitudes();
  for (const auto& [occ, amp] : second.amplitudes()) diff[permute(occ, perm)] -= amp;
  double worst = 0.0;
  for (const auto& [occ, amp] : diff) worst = std::max(worst, std::abs(amp));
  return worst;
}

}  // namespace photonholes
