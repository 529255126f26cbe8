#pragma once

#include "lesionseg/mask.hpp"

namespace lesionseg {

// Discrete disk structuring element: offsets with dx^2 + dy^2 <= r^2.
// Erosion pads outside the frame with foreground and dilation with
// background, so erode/dilate form an adjunction on masks of this frame and
// the derived opening/closing keep their lattice properties exactly.
BinaryMask erode_disk(const BinaryMask& mask, int radius);
BinaryMask dilate_disk(const BinaryMask& mask, int radius);

BinaryMask open_disk(const BinaryMask& mask, int radius);
BinaryMask close_disk(const BinaryMask& mask, int radius);

// Opening then closing.
BinaryMask open_close(const BinaryMask& mask, int radius);

}  // namespace lesionseg
