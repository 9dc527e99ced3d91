#pragma once

#include <cstddef>
#include <cstdint>
#include <map>

#include "sfseg/config.hpp"
#include "sfseg/core_types.hpp"

namespace sfseg {

// Foreground class sizes of a label map. Only classes with a positive voxel
// count appear in `counts` and `lambdas`.
struct SizeStats {
  std::map<std::uint8_t, std::size_t> counts;
  std::uint8_t min_class = 0;  // smallest positive count, lowest id on ties
  std::map<std::uint8_t, double> lambdas;  // inverse-size weights, sum to 1
};

// Throws NoForeground when every voxel is background.
SizeStats class_sizes(const LabelVolume& y);

// Takes the smallest foreground class of `refined` from `refined` and every
// other class from `segmentation`; segmentation votes for the smallest class
// fall back to background. Soft mode mixes one-hot channels with the
// smallest class's lambda before the argmax.
LabelVolume size_aware_fuse(const LabelVolume& refined,
                            const LabelVolume& segmentation, FusionMode mode);

// Returns `segmentation` unchanged when `refined` holds a single foreground
// class, otherwise size_aware_fuse.
LabelVolume fuse_or_bypass(const LabelVolume& refined,
                           const LabelVolume& segmentation,
                           FusionMode mode = FusionMode::Hard);

// True when fuse_or_bypass would skip fusion for this input.
bool fusion_bypassed(const LabelVolume& refined);

}  // namespace sfseg
