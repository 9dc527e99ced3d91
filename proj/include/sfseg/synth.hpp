#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sfseg/core_types.hpp"

namespace sfseg {

// Evenly spaced intensities 0.1 .. 0.9 for `classes` classes.
std::vector<double> default_class_intensities(std::size_t classes);

struct PhantomSpec {
  GridShape shape{{32, 32, 32}};
  std::size_t classes = 4;
  // Semi-axes (voxels) per foreground class, outermost first. A single value
  // means a sphere.
  std::vector<std::vector<double>> nesting{{12.0}, {8.0}, {4.0}};
  std::vector<double> class_intensities;  // empty: default_class_intensities
  std::uint64_t seed = 0;
};

struct Phantom {
  LabelVolume labels;
  Image image;
};

// Nested ellipsoids, inner classes overriding outer ones. The seed jitters
// each ellipsoid center inside the slack left by its parent.
Phantom make_phantom(const PhantomSpec& spec);

struct CorruptionSpec {
  double boundary_blur_sigma = 1.0;  // voxels
  double logit_noise_std = 0.5;
  double flip_rate = 0.1;
  double logit_scale = 10.0;  // logit of the true class before corruption
  std::uint64_t seed = 0;
};

// One-hot logits, blurred per channel, plus Gaussian noise; a `flip_rate`
// fraction of voxels get a wrong class pushed just above the top logit.
// Softmax-normalized.
ProbVolume corrupt_probmap(const LabelVolume& gt, const CorruptionSpec& spec);

struct RenderSpec {
  double quality = 1.0;
  std::vector<double> class_intensities;  // empty: default_class_intensities
  double noise_std = 0.1;
  double edge_jitter = 2.0;  // px, scaled by (1 - quality)
  std::uint64_t seed = 0;
};

// Class-intensity image of `y` whose boundaries are displaced by a smooth
// random field bounded by edge_jitter * (1 - quality), with additive noise
// of std noise_std * (1 - quality), clamped to [0, 1].
Image render_candidate(const LabelVolume& y, const RenderSpec& spec);

// Nearest class intensity per voxel, ties to the lowest class id.
LabelVolume toy_segment(const Image& img, std::span<const double> class_intensities);

}  // namespace sfseg
