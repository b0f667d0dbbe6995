#pragma once

#include <complex>
#include <span>
#include <vector>

namespace jitterlab {

// Forward DFT X_k = sum_n x_n e^{-2 pi i k n / N}.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> x);

// Inverse DFT with 1/N normalization.
std::vector<std::complex<double>> idft(std::span<const std::complex<double>> x);

// Signed frequency of bin k on (-fs/2, fs/2]. For even N the Nyquist bin maps
// to -fs/2.
double bin_frequency(std::size_t k, std::size_t n, double fs);

}  // namespace jitterlab
