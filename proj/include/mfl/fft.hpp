#pragma once

#include <complex>
#include <vector>

namespace mfl {

enum class FftSign { forward = -1, backward = +1 };

/// Unnormalised DFT of any length: X_j = sum_t x_t e^{sign 2 pi i j t / n}.
/// Backed by FFTW with aligned buffers, so the output is reproducible.
std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x, FftSign sign);

}  // namespace mfl
