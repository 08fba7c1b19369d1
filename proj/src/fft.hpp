#pragma once

#include <span>

#include "mfcz/grid_signal.hpp"

namespace mfcz::detail {

// Unnormalized in-place DFT. Forward uses exp(-2 pi i m i / n).
void fft_inplace(std::span<Complex> data, bool inverse);

}  // namespace mfcz::detail
