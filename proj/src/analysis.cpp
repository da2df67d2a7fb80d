#include "photonholes/analysis.hpp"

#include <algorithm>
#include <array>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>
#include <numeric>

namespace photonholes {

VisibilityReport visibility_from_peaks(double c0, double cpi) {
  if (!(c0 >= 0.0 && cpi >= 0.0)) throw AnalysisError("peak counts must be non-negative");
  if (c0 + cpi == 0.0) throw AnalysisError("visibility undefined: both peaks are zero");
  return VisibilityReport{c0, cpi, (c0 - cpi) / (c0 + cpi), VisibilityReport::Method::peak_ratio};
}

double g2_zero(std::span<const double> distribution) {
  double mean = 0.0;
  double factorial_moment = 0.0;
  for (std::size_t n = 0; n < distribution.size(); ++n) {
    const double x = static_cast<double>(n);
    mean += x * distribution[n];
    factorial_moment += x * (x - 1.0) * distribution[n];
  }
  if (mean <= 0.0) throw AnalysisError("g2(0) undefined for zero mean photon number");
  return factorial_moment / (mean * mean);
}

double g2_zero(std::span<const std::int64_t> counts) {
  std::vector<double> p(counts.begin(), counts.end());
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (total <= 0.0) throw AnalysisError("g2(0) undefined for an empty count record");
  for (auto& x : p) x /= total;
  return g2_zero(std::span<const double>(p));
}

double FringeFit::minimum_phase() const {
  const double two_pi = 2.0 * std::numbers::pi;
  const double m = std::fmod(std::numbers::pi - phase_offset, two_pi);
  return m < 0.0 ? m + two_pi : m;
}

FringeFit fit_fringe(std::span<const double> phases, std::span<const double> values) {
  if (phases.size() != values.size()) throw AnalysisError("fringe fit: length mismatch");
  if (phases.size() < 3) throw AnalysisError("fringe fit needs at least 3 points");
  // Normal equations for the basis {1, cos, sin}.
  std::array<std::array<double, 4>, 3> m{};
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double basis[3] = {1.0, std::cos(phases[i]), std::sin(phases[i])};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
      m[r][3] += basis[r] * values[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) < 1e-300) throw AnalysisError("fringe fit: degenerate phase sampling");
    std::swap(m[col], m[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  const double c0 = m[0][3] / m[0][0];
  const double c1 = m[1][3] / m[1][1];
  const double c2 = m[2][3] / m[2][2];
  if (c0 <= 0.0) throw AnalysisError("fringe fit: non-positive mean");
  double worst = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double model = c0 + c1 * std::cos(phases[i]) + c2 * std::sin(phases[i]);
    worst = std::max(worst, std::abs(values[i] - model) / c0);
  }
  return FringeFit{c0, std::hypot(c1, c2) / c0, std::atan2(-c2, c1), worst};
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

std::vector<double> poisson_distribution(double mean, std::size_t size) {
  std::vector<double> p(size);
  double term = std::exp(-mean);
  for (std::size_t n = 0; n < size; ++n) {
    if (n > 0) term *= mean / static_cast<double>(n);
    p[n] = term;
  }
  return p;
}

double mean_photon_number(std::span<const double> distribution) {
  double mean = 0.0;
  for (std::size_t n = 0; n < distribution.size(); ++n) mean += static_cast<double>(n) * distribution[n];
  return mean;
}

double chi_square_equal_heights_p_value(std::span<const double> counts) {
  if (counts.size() < 2) throw AnalysisError("chi-square test needs at least two peaks");
  const double expected = std::accumulate(counts.begin(), counts.end(), 0.0) / counts.size();
  if (expected <= 0.0) throw AnalysisError("chi-square test on empty peaks");
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

}  // namespace photonholes
