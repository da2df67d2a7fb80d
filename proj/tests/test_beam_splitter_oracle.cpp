// Independent check of the beam splitter against a dense matrix exponential of
// its generator on the two-mode space.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "photonholes/fock_state.hpp"

using namespace photonholes;

namespace {

constexpr int kCut = 4;
constexpr int kDim = (kCut + 1) * (kCut + 1);

int index(int na, int nb) { return na * (kCut + 1) + nb; }

// U = exp(i x (e^{-i theta} a^dag b + e^{i theta} b^dag a)), x = arccos(sqrt(t)).
Eigen::MatrixXcd dense_unitary(double t, double theta) {
  const double x = std::acos(std::sqrt(t));
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(kDim, kDim);
  for (int na = 0; na <= kCut; ++na) {
    for (int nb = 0; nb <= kCut; ++nb) {
      // a^dag b |na, nb> = sqrt((na+1) nb) |na+1, nb-1>
      if (nb > 0 && na < kCut)
        g(index(na + 1, nb - 1), index(na, nb)) += x * std::polar(1.0, -theta) * std::sqrt(double((na + 1) * nb));
      if (na > 0 && nb < kCut)
        g(index(na - 1, nb + 1), index(na, nb)) += x * std::polar(1.0, theta) * std::sqrt(double(na * (nb + 1)));
    }
  }
  const Eigen::MatrixXcd ig = Complex(0.0, 1.0) * g;
  return ig.exp();
}

}  // namespace

TEST_CASE("beam splitter matches the dense generator on every basis state up to four photons") {
  const ModeLabel a{"a", 0};
  const ModeLabel b{"b", 0};
  const std::pair<double, double> settings[] = {{0.5, 0.0}, {0.2, 0.0}, {0.83, 1.1}, {0.5, -2.3}, {0.05, 3.0}};
  for (const auto& [t, theta] : settings) {
    const Eigen::MatrixXcd u = dense_unitary(t, theta);
    for (int na = 0; na <= kCut; ++na) {
      for (int nb = 0; na + nb <= kCut; ++nb) {
        const int counts[] = {na, nb};
        const FockState out = apply_beam_splitter(make_number_state({a, b}, kCut, counts), a, b, t, theta);
        double worst = 0.0;
        for (int ma = 0; ma <= kCut; ++ma) {
          for (int mb = 0; mb <= kCut; ++mb) {
            const int m[] = {ma, mb};
            worst = std::max(worst, std::abs(out.amplitude(m) - u(index(ma, mb), index(na, nb))));
          }
        }
        INFO("t=" << t << " theta=" << theta << " input |" << na << "," << nb << ">");
        CHECK(worst < 1e-10);
      }
    }
  }
}

TEST_CASE("beam splitter matches the dense generator on superpositions with a spectator mode") {
  const ModeLabel a{"a", 0};
  const ModeLabel s{"spectator", 0};
  const ModeLabel b{"b", 0};
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  const double t = 0.37;
  const double theta = 0.9;
  const Eigen::MatrixXcd u = dense_unitary(t, theta);
  for (int trial = 0; trial < 10; ++trial) {
    // Spectator occupation 1, random superposition of |na, nb> with na + nb <= 4.
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(kDim);
    AmplitudeMap amps;
    for (int na = 0; na <= kCut; ++na) {
      for (int nb = 0; na + nb <= kCut; ++nb) {
        const Complex c(g(rng), g(rng));
        v(index(na, nb)) = c;
        const int counts[] = {na, 1, nb};
        amps[Occupation(counts)] = c;
      }
    }
    const FockState out = apply_beam_splitter(FockState({a, s, b}, kCut, amps), a, b, t, theta);
    const Eigen::VectorXcd expected = u * v;
    double worst = 0.0;
    for (int na = 0; na <= kCut; ++na) {
      for (int nb = 0; nb <= kCut; ++nb) {
        const int counts[] = {na, 1, nb};
        worst = std::max(worst, std::abs(out.amplitude(counts) - expected(index(na, nb))));
      }
    }
    CHECK(worst < 1e-10);
  }
}
