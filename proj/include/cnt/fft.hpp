#pragma once

#include "cnt/grid.hpp"

namespace cnt {

/// In-place 2D complex DFT (unnormalized forward, as in the usual convention).
void fft2_forward(ComplexGrid& g);

/// In-place 2D inverse DFT, scaled by 1/(width*height) so that
/// fft2_inverse(fft2_forward(x)) == x up to rounding.
void fft2_inverse(ComplexGrid& g);

}  // namespace cnt
