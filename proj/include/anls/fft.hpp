#pragma once
// Complex DFT wrapper over FFTW with a process-wide plan cache.
// The FFTW planner is not thread-safe; plan creation is serialized and
// execution uses the new-array interface so concurrent transforms on
// distinct buffers are safe.

#include <complex>
#include <vector>

namespace anls::fft {

// In-place DFT of v.
//   sign = -1: X_k = sum_j v_j e^{-2 pi i jk/n}   (forward, unnormalized)
//   sign = +1: X_j = sum_k v_k e^{+2 pi i jk/n}   (inverse, unnormalized)
void dft(std::vector<std::complex<double>>& v, int sign);

}  // namespace anls::fft
