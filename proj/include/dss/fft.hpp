#pragma once

// Thin wrapper around FFTW with a process-wide plan cache. Plan creation is
// serialized behind a mutex (FFTW planning is not thread safe); execution via
// the new-array interface is safe from multiple threads on distinct buffers.

#include <complex>
#include <vector>

namespace dss {

// In-place forward FFT (unnormalized, e^{-j2*pi*k*n/N} kernel).
void fft_forward(std::vector<std::complex<double>>& data);

// In-place inverse FFT, normalized by 1/N.
void fft_inverse(std::vector<std::complex<double>>& data);

// FFT bin frequency for bin m of an N-point transform at sample rate fs:
// m < (N+1)/2 -> m*fs/N, otherwise (m-N)*fs/N.
double fft_bin_freq(std::size_t m, std::size_t n, double fs);

}  // namespace dss
