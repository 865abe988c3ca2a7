#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "apint/spectral_rswe.hpp"

namespace apint::testing {

// Random real state with modes |k| <= band, conjugate symmetric.
inline SpectralState random_state(const ModelConfig& cfg, int band, unsigned seed,
                                  double amplitude = 0.1) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, amplitude);
  const int n = cfg.n_modes;
  auto s = SpectralState::zeros(n);
  for (int c = 0; c < 3; ++c) {
    s.coeffs(c, 0) = g(rng);
    for (int k = 1; k <= band; ++k) {
      s.coeffs(c, k) = Complex(g(rng), g(rng));
      s.coeffs(c, n - k) = std::conj(s.coeffs(c, k));
    }
  }
  return s;
}

// Spectrum of a real grid function f(x).
template <class F>
std::vector<Complex> spectrum_of(const ModelConfig& cfg, F f) {
  const auto x = grid_points(cfg);
  std::vector<double> v(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) v[j] = f(x[j]);
  return to_spectral(v);
}

struct ZeroNonlinear {
  SpectralState operator()(const SpectralState& s, const ModelConfig&) const {
    return SpectralState::zeros(s.n_modes(), s.time);
  }
};

}  // namespace apint::testing
