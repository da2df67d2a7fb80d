#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace photonholes {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VisibilityReport {
  enum class Method { peak_ratio, fringe_fit };
  double c_constructive;
  double c_destructive;
  double visibility;
  Method method;
};

/// (c0 - cpi) / (c0 + cpi) for the zero-delay peaks at phi = 0 and phi = pi.
VisibilityReport visibility_from_peaks(double c0, double cpi);

/// <n(n-1)> / <n>^2 of a photon-number distribution P(n).
double g2_zero(std::span<const double> distribution);
/// Same, from a histogram of observed photon numbers.
double g2_zero(std::span<const std::int64_t> counts);

/// y = c0 + c1 cos(phi) + c2 sin(phi) by least squares, reported as
/// y = mean [1 + visibility cos(phi + phase_offset)].
struct FringeFit {
  double mean;
  double visibility;
  double phase_offset;
  double max_relative_residual;

  /// Phase at which the fitted fringe is minimal, in [0, 2 pi).
  double minimum_phase() const;
};

FringeFit fit_fringe(std::span<const double> phases, std::span<const double> values);

/// Total-variation distance between two distributions (shorter one zero-padded).
double total_variation(std::span<const double> p, std::span<const double> q);

/// Poisson law with the given mean on 0..size-1 (not renormalized).
std::vector<double> poisson_distribution(double mean, std::size_t size);

double mean_photon_number(std::span<const double> distribution);

/// Upper-tail p-value of Pearson's chi-square for equal expected counts.
double chi_square_equal_heights_p_value(std::span<const double> counts);

}  // namespace photonholes
