#include "photonholes/detection.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace photonholes {

TacHistogram::TacHistogram(double bin_width, double window) : bin_width_(bin_width), window_(window) {
  if (!(bin_width > 0.0) || !(window > 0.0))
    throw std::invalid_argument("histogram bin width and window must be positive");
  const double bins = 2.0 * window / bin_width;
  const double rounded = std::round(bins);
  if (rounded < 1.0 || std::abs(bins - rounded) > 1e-9 * bins)
    throw std::invalid_argument("histogram bins must tile [-window, window] exactly");
  counts_.assign(static_cast<std::size_t>(rounded), 0);
}

double TacHistogram::bin_start(std::size_t i) const {
  return -window_ + static_cast<double>(i) * bin_width_;
}

std::int64_t TacHistogram::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

bool TacHistogram::add(double delay, std::int64_t count) {
  if (!(delay >= -window_ && delay <= window_)) return false;
  auto bin = static_cast<std::size_t>(std::floor((delay + window_) / bin_width_));
  bin = std::min(bin, counts_.size() - 1);
  counts_[bin] += count;
  return true;
}

void TacHistogram::set_count(std::size_t bin, std::int64_t count) {
  if (count < 0) throw std::invalid_argument("histogram counts must be non-negative");
  counts_.at(bin) = count;
}

bool TacHistogram::same_geometry(const TacHistogram& other) const {
  return counts_.size() == other.counts_.size() &&
         std::abs(bin_width_ - other.bin_width_) <= 1e-12 * bin_width_ &&
         std::abs(window_ - other.window_) <= 1e-12 * window_;
}

TacHistogram& TacHistogram::merge(const TacHistogram& other) {
  if (!same_geometry(other)) throw std::invalid_argument("cannot merge histograms with different geometry");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  n_starts_ += other.n_starts_;
  return *this;
}

std::vector<std::pair<int, std::int64_t>> TacHistogram::peak_counts(double period) const {
  if (!(period > 0.0)) throw std::invalid_argument("peak period must be positive");
  const int k_max = static_cast<int>(std::floor(window_ / period + 1e-9));
  std::vector<std::pair<int, std::int64_t>> peaks;
  for (int k = -k_max; k <= k_max; ++k) peaks.emplace_back(k, 0);
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    const int k = static_cast<int>(std::lround(bin_center(i) / period));
    if (k < -k_max || k > k_max) continue;
    peaks[static_cast<std::size_t>(k + k_max)].second += counts_[i];
  }
  return peaks;
}

TacHistogram merge(TacHistogram first, const TacHistogram& second) {
  first.merge(second);
  return first;
}

ClickSampler::ClickSampler(const FockState& state, std::span<const ModeLabel> group_a,
                           std::span<const ModeLabel> group_b, const DetectorConfig& det)
    : det_(det) {
  det_.validate();
  const auto joint = joint_number_distribution(state, group_a, group_b);
  double acc = 0.0;
  for (std::size_t na = 0; na < joint.size(); ++na) {
    for (std::size_t nb = 0; nb < joint[na].size(); ++nb) {
      if (joint[na][nb] <= 0.0) continue;
      acc += joint[na][nb];
      outcomes_.emplace_back(static_cast<int>(na), static_cast<int>(nb));
      cumulative_.push_back(acc);
    }
  }
  for (auto& c : cumulative_) c /= acc;
}

std::pair<bool, bool> ClickSampler::sample(RngStream& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double u = uniform(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  const auto [na, nb] = outcomes_[static_cast<std::size_t>(it - cumulative_.begin())];
  const bool a = uniform(rng) < click_probability(na, det_);
  const bool b = uniform(rng) < click_probability(nb, det_);
  return {a, b};
}

std::pair<bool, bool> sample_pulse_clicks(const FockState& state, const ModeLabel& out_a,
                                          const ModeLabel& out_b, const DetectorConfig& det,
                                          RngStream& rng) {
  const ModeLabel ga[] = {out_a};
  const ModeLabel gb[] = {out_b};
  return ClickSampler(state, ga, gb, det).sample(rng);
}

RngStream derive_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return RngStream(seq);
}

ClickRecord simulate_clicks(const ClickSampler& sampler, std::int64_t n_pulses, std::uint64_t seed) {
  if (n_pulses < 1) throw std::invalid_argument("n_pulses must be at least 1");
  const std::int64_t n_batches = (n_pulses + kPulseBatch - 1) / kPulseBatch;

  auto run_batch = [&sampler, n_pulses, seed](std::int64_t b) {
    RngStream rng = derive_stream(seed, static_cast<std::uint64_t>(b));
    ClickRecord part;
    const std::int64_t begin = b * kPulseBatch;
    const std::int64_t end = std::min(n_pulses, begin + kPulseBatch);
    for (std::int64_t i = begin; i < end; ++i) {
      const auto [a, bb] = sampler.sample(rng);
      if (a) part.clicks_a.push_back(i);
      if (bb) part.clicks_b.push_back(i);
    }
    return part;
  };

  const auto workers = static_cast<std::int64_t>(std::max(1u, std::thread::hardware_concurrency()));
  ClickRecord record;
  record.n_pulses = n_pulses;
  for (std::int64_t first = 0; first < n_batches; first += workers) {
    std::vector<std::future<ClickRecord>> pending;
    for (std::int64_t b = first; b < std::min(n_batches, first + workers); ++b)
      pending.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, run_batch, b));
    for (auto& f : pending) {
      ClickRecord part = f.get();
      record.clicks_a.insert(record.clicks_a.end(), part.clicks_a.begin(), part.clicks_a.end());
      record.clicks_b.insert(record.clicks_b.end(), part.clicks_b.begin(), part.clicks_b.end());
    }
  }
  return record;
}

TacHistogram accumulate_coincidences(const ClickRecord& events, const PulseTrainConfig& train,
                                     TacHistogram hist, const DetectorConfig& det, RngStream& rng) {
  train.validate();
  det.validate();
  const double period = train.period();
  const auto reach = static_cast<std::int64_t>(std::floor(hist.window() / period + 1e-9));
  // Difference of two independent detector jitters.
  std::normal_distribution<double> jitter(0.0, std::sqrt(2.0) * det.jitter_sigma);
  const auto& b = events.clicks_b;
  for (std::int64_t i : events.clicks_a) {
    auto it = std::lower_bound(b.begin(), b.end(), i - reach);
    for (; it != b.end() && *it <= i + reach; ++it) {
      double delay = static_cast<double>(*it - i) * period;
      if (det.jitter_sigma > 0.0) delay += jitter(rng);
      hist.add(delay);
    }
  }
  hist.add_starts(static_cast<std::int64_t>(events.clicks_a.size()));
  return hist;
}

}  // namespace photonholes
