#pragma once

#include <complex>

namespace nsteady::detail {

// In-place 3D DFT on an n^3 array laid out x-fastest ((iz*n+iy)*n+ix).
// forward applies e^{-i k.x} and the 1/n^3 normalization; the inverse is
// unnormalized, so inverse(forward(f)) == f.
void fft3(int n, std::complex<double>* data, bool forward);

}  // namespace nsteady::detail
