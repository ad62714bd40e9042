#pragma once
#include <complex>
#include <span>
#include <vector>

namespace lklab::fft {

// Real-to-complex forward transform (unnormalized): returns n/2 + 1
// coefficients X_m = sum_j x_j exp(-2 pi i j m / n).
std::vector<std::complex<double>> forward(std::span<const double> x);

// Complex-to-real inverse; scales by 1/n so inverse(forward(x), n) == x.
std::vector<double> inverse(std::span<const std::complex<double>> X, int n);

}  // namespace lklab::fft
