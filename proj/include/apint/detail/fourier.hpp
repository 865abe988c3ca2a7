#pragma once

#include <complex>
#include <span>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace apint::detail {

// Periodic 1-D transforms with the convention
//   c_k = (1/N) sum_j u_j exp(-i k x_j),   u_j = sum_k c_k exp(i k x_j).
// Each thread owns its own FFT object; Eigen's plan cache is not shareable.
class Fourier {
 public:
  static Fourier& local() {
    thread_local Fourier instance;
    return instance;
  }

  void forward(std::span<const std::complex<double>> physical,
               std::vector<std::complex<double>>& spectral) {
    in_.assign(physical.begin(), physical.end());
    fft_.fwd(spectral, in_);
    const double scale = 1.0 / static_cast<double>(physical.size());
    for (auto& c : spectral) c *= scale;
  }

  void inverse(std::span<const std::complex<double>> spectral,
               std::vector<std::complex<double>>& physical) {
    in_.assign(spectral.begin(), spectral.end());
    fft_.inv(physical, in_);
  }

 private:
  Fourier() { fft_.SetFlag(Eigen::FFT<double>::Unscaled); }

  Eigen::FFT<double> fft_;
  std::vector<std::complex<double>> in_;
};

}  // namespace apint::detail
