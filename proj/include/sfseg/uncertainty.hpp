#pragma once

#include "sfseg/core_types.hpp"

namespace sfseg {

struct EntropyMaps {
  ScalarField voxel_entropy;     // H(v), bits, in [0, log2 C]
  ScalarField regional_entropy;  // E(v), neighborhood mean of H / log2 C
};

// Shannon entropy in bits per voxel, with 0 * log 0 taken as 0.
ScalarField voxel_entropy(const ProbVolume& p);

// Mean of `h` over the 3x3 (2D) or 3x3x3 (3D) window around each voxel,
// clipped to the grid at borders, normalized by log2(classes).
ScalarField regional_entropy(const ScalarField& h, std::size_t classes);

// Keeps y(v) where h(v) <= tau1 and sets the rest to background.
LabelVolume entropy_mask(const LabelVolume& y, const ScalarField& h,
                         double tau1);

}  // namespace sfseg
