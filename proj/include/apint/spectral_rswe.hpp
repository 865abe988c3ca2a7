#pragma once

// Fourier pseudospectral discretisation of the 1-D rotating shallow water
// equations
//
//   u_t + (1/eps) L u + N(u, u) = 0,     u = (v1, v2, h)
//
//   L = [ 0  -1  F^{-1/2} d/dx ]        N(u, u) = ( v1 (v1)_x )
//       [ 1   0  0             ]                  ( v1 (v2)_x )
//       [ F^{-1/2} d/dx  0  0  ]                  ( (h v1)_x  )
//
// on a periodic domain of length `domain_length`. The timescale parameter
// eps lives in ModelConfig only; every operator here is eps-free and the
// propagators apply the 1/eps scaling.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apint/detail/fourier.hpp"

namespace apint {

using Complex = std::complex<double>;
using Coeffs = Eigen::Matrix<Complex, 3, Eigen::Dynamic>;
using Mat3 = Eigen::Matrix<Complex, 3, 3>;
using Vec3 = Eigen::Matrix<Complex, 3, 1>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct ModelConfig {
  double epsilon = 1.0;
  double froude = 1.0;
  int n_modes = 64;
  double domain_length = two_pi;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
      throw std::invalid_argument("epsilon must lie in (0, 1]");
    if (!(froude > 0.0)) throw std::invalid_argument("froude constant must be positive");
    if (n_modes < 8 || (n_modes & (n_modes - 1)) != 0)
      throw std::invalid_argument("n_modes must be a power of two >= 8");
    if (!(domain_length > 0.0)) throw std::invalid_argument("domain_length must be positive");
  }

  // d/dx -> i * wavenumber_scale() * k
  double wavenumber_scale() const { return two_pi / domain_length; }

  // Largest wavenumber retained by the 2/3-rule.
  int dealias_cutoff() const { return n_modes / 3; }

  // Closed-form dispersion relation, branch in {-1, 0, +1}.
  double frequency(int k, int branch) const {
    if (branch == 0) return 0.0;
    const double kappa = wavenumber_scale() * k;
    return branch * std::sqrt(1.0 + kappa * kappa / froude);
  }
};

// Signed wavenumber stored at DFT index `index`.
inline int wavenumber(int index, int n) { return index <= n / 2 ? index : index - n; }
inline int mode_index(int k, int n) { return k >= 0 ? k : k + n; }

// Fourier coefficients of (v1, v2, h): row = component, column = DFT index.
struct SpectralState {
  Coeffs coeffs;
  double time = 0.0;

  static SpectralState zeros(int n_modes, double t = 0.0) {
    return {Coeffs::Zero(3, n_modes), t};
  }

  int n_modes() const { return static_cast<int>(coeffs.cols()); }
  double norm() const { return coeffs.norm(); }
};

inline bool all_finite(const SpectralState& s) {
  for (Eigen::Index j = 0; j < s.coeffs.size(); ++j) {
    const Complex c = s.coeffs.data()[j];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

// Checks c(-k) == conj(c(k)) per component, including a real mean and Nyquist.
inline bool is_conjugate_symmetric(const SpectralState& s, double tol = 1e-12) {
  const int n = s.n_modes();
  const double scale = std::max(1.0, s.norm());
  for (int c = 0; c < 3; ++c) {
    for (int j = 0; j <= n / 2; ++j) {
      const Complex a = s.coeffs(c, j);
      const Complex b = s.coeffs(c, (n - j) % n);
      if (std::abs(a - std::conj(b)) > tol * scale) return false;
    }
  }
  return true;
}

// ||a - b|| / ||b||, falling back to the absolute difference for b == 0.
inline double relative_difference(const SpectralState& a, const SpectralState& b) {
  const double diff = (a.coeffs - b.coeffs).norm();
  const double ref = b.norm();
  return ref > 0.0 ? diff / ref : diff;
}

// ---------------------------------------------------------------------------
// Physical <-> spectral transforms of one real field.

inline std::vector<double> grid_points(const ModelConfig& cfg) {
  std::vector<double> x(cfg.n_modes);
  for (int j = 0; j < cfg.n_modes; ++j) x[j] = cfg.domain_length * j / cfg.n_modes;
  return x;
}

inline std::vector<Complex> to_spectral(const std::vector<double>& field) {
  std::vector<Complex> physical(field.begin(), field.end());
  std::vector<Complex> spectral;
  detail::Fourier::local().forward(physical, spectral);
  return spectral;
}

inline std::vector<double> to_physical(const std::vector<Complex>& spectral) {
  std::vector<Complex> physical;
  detail::Fourier::local().inverse(spectral, physical);
  std::vector<double> out(physical.size());
  std::transform(physical.begin(), physical.end(), out.begin(),
                 [](Complex z) { return z.real(); });
  return out;
}

inline std::vector<Complex> component(const SpectralState& s, int c) {
  std::vector<Complex> out(s.n_modes());
  for (int j = 0; j < s.n_modes(); ++j) out[j] = s.coeffs(c, j);
  return out;
}

inline void set_component(SpectralState& s, int c, const std::vector<Complex>& values) {
  for (int j = 0; j < s.n_modes(); ++j) s.coeffs(c, j) = values[j];
}

// ---------------------------------------------------------------------------
// Linear operator.

inline Mat3 build_symbol(const ModelConfig& cfg, int k) {
  if (std::abs(k) > cfg.n_modes / 2)
    throw std::out_of_range("wavenumber " + std::to_string(k) + " outside |k| <= N/2");
  const Complex dx(0.0, cfg.wavenumber_scale() * k / std::sqrt(cfg.froude));
  Mat3 m = Mat3::Zero();
  m(0, 1) = -1.0;
  m(0, 2) = dx;
  m(1, 0) = 1.0;
  m(2, 0) = dx;
  return m;
}

// Per-wavenumber eigendecomposition L(k) r = i omega r, branches ordered
// alpha = -1, 0, +1. Eigenvectors are scaled so the largest-magnitude entry
// (first one on ties) is real and positive.
class EigenDecomposition {
 public:
  struct Mode {
    int wavenumber = 0;
    std::array<double, 3> omegas{};
    Mat3 right;
    Mat3 inverse;
  };

  EigenDecomposition() = default;
  explicit EigenDecomposition(std::vector<Mode> modes) : modes_(std::move(modes)) {}

  int n_modes() const { return static_cast<int>(modes_.size()); }
  const Mode& at_index(int j) const { return modes_.at(j); }
  const Mode& at_wavenumber(int k) const { return modes_.at(mode_index(k, n_modes())); }

  double max_frequency() const {
    double m = 0.0;
    for (const auto& mode : modes_) m = std::max(m, mode.omegas[2]);
    return m;
  }

 private:
  std::vector<Mode> modes_;
};

namespace detail {

inline void fix_phase(Eigen::Ref<Vec3> v) {
  double best = 0.0;
  for (int i = 0; i < 3; ++i) best = std::max(best, std::abs(v(i)));
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v(i)) >= best * (1.0 - 1e-12)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = Complex(v(i).real(), 0.0);
      return;
    }
  }
}

}  // namespace detail

inline EigenDecomposition eigendecompose(const ModelConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_modes;
  std::vector<EigenDecomposition::Mode> modes(n);
  for (int j = 0; j < n; ++j) {
    const int k = wavenumber(j, n);
    const Mat3 symbol = build_symbol(cfg, k);
    // -i L is Hermitian; its real eigenvalues are the frequencies.
    const Mat3 hermitian = Complex(0.0, -1.0) * symbol;
    Eigen::SelfAdjointEigenSolver<Mat3> solver(hermitian);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("eigensolver failed at k = " + std::to_string(k));

    auto& mode = modes[j];
    mode.wavenumber = k;
    mode.right = solver.eigenvectors();
    for (int a = 0; a < 3; ++a) {
      mode.omegas[a] = cfg.frequency(k, a - 1);
      detail::fix_phase(mode.right.col(a));
    }
    mode.inverse = mode.right.adjoint();

    const double scale = std::max(1.0, mode.omegas[2]);
    for (int a = 0; a < 3; ++a) {
      if (std::abs(solver.eigenvalues()(a) - mode.omegas[a]) > 1e-12 * scale)
        throw std::logic_error("dispersion relation mismatch at k = " + std::to_string(k));
      const Vec3 r = mode.right.col(a);
      const double residual = (symbol * r - Complex(0.0, mode.omegas[a]) * r).norm();
      if (residual > 1e-12 * scale)
        throw std::logic_error("eigenvector residual too large at k = " + std::to_string(k));
    }
    if ((mode.right * mode.inverse - Mat3::Identity()).norm() > 1e-12)
      throw std::logic_error("eigenvector matrix not invertible at k = " + std::to_string(k));
  }
  return EigenDecomposition(std::move(modes));
}

// Returns exp(tau L) applied to the state. Negative wavenumbers are filled by
// conjugation, so conjugate symmetry of the input is preserved exactly.
inline SpectralState apply_linear_exponential(const SpectralState& state, double tau,
                                              const EigenDecomposition& eig) {
  const int n = state.n_modes();
  if (eig.n_modes() != n) throw std::invalid_argument("decomposition/state size mismatch");
  SpectralState out{Coeffs(3, n), state.time};
  for (int j = 0; j <= n / 2; ++j) {
    const auto& mode = eig.at_index(j);
    Vec3 sigma = mode.inverse * state.coeffs.col(j);
    for (int a = 0; a < 3; ++a) sigma(a) *= std::polar(1.0, mode.omegas[a] * tau);
    out.coeffs.col(j) = mode.right * sigma;
  }
  for (int j = 1; j < (n + 1) / 2; ++j) out.coeffs.col(n - j) = out.coeffs.col(j).conjugate();
  return out;
}

// ---------------------------------------------------------------------------
// Quadratic operator with 2/3-rule dealiasing of inputs and outputs.

inline SpectralState eval_nonlinear(const SpectralState& state, const ModelConfig& cfg) {
  const int n = state.n_modes();
  if (n != cfg.n_modes) throw std::invalid_argument("state/config size mismatch");
  const int cutoff = cfg.dealias_cutoff();
  const double scale = cfg.wavenumber_scale();

  std::vector<Complex> v1(n, 0.0), v1x(n, 0.0), v2x(n, 0.0), h(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const int k = wavenumber(j, n);
    if (std::abs(k) > cutoff) continue;
    const Complex ik(0.0, scale * k);
    v1[j] = state.coeffs(0, j);
    v1x[j] = ik * state.coeffs(0, j);
    v2x[j] = ik * state.coeffs(1, j);
    h[j] = state.coeffs(2, j);
  }

  auto& fourier = detail::Fourier::local();
  std::vector<Complex> p_v1, p_v1x, p_v2x, p_h;
  fourier.inverse(v1, p_v1);
  fourier.inverse(v1x, p_v1x);
  fourier.inverse(v2x, p_v2x);
  fourier.inverse(h, p_h);

  std::vector<Complex> prod(n);
  std::vector<Complex> spec;
  SpectralState out = SpectralState::zeros(n, state.time);
  auto emit = [&](int c, bool differentiate) {
    fourier.forward(prod, spec);
    for (int j = 0; j <= n / 2; ++j) {
      const int k = wavenumber(j, n);
      if (k > cutoff) continue;
      Complex value = differentiate ? Complex(0.0, scale * k) * spec[j] : spec[j];
      if (j == 0) value = Complex(value.real(), 0.0);
      out.coeffs(c, j) = value;
      if (j > 0) out.coeffs(c, n - j) = std::conj(value);
    }
  };

  for (int j = 0; j < n; ++j) prod[j] = p_v1[j].real() * p_v1x[j].real();
  emit(0, false);
  for (int j = 0; j < n; ++j) prod[j] = p_v1[j].real() * p_v2x[j].real();
  emit(1, false);
  for (int j = 0; j < n; ++j) prod[j] = p_h[j].real() * p_v1[j].real();
  emit(2, true);
  return out;
}

}  // namespace apint
