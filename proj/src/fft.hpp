#pragma once

#include <span>

#include "mll/spectral.hpp"

namespace mll::detail {

// Grid samples -> coefficients, normalized so u(x) = sum_k c(k) e^{ik.x}.
void forward_transform(const TorusGrid& grid, std::span<const Complex> physical, std::span<Complex> spectral);
// Coefficients -> grid samples.
void inverse_transform(const TorusGrid& grid, std::span<const Complex> spectral, std::span<Complex> physical);

}  // namespace mll::detail
