#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sfseg/core_types.hpp"

namespace sfseg {

using Point3 = std::array<double, 3>;

struct ClassMetrics {
  double dice = 0.0;
  std::optional<double> asd;  // empty when either mask is empty
};

struct MetricsReport {
  std::map<std::uint8_t, ClassMetrics> per_class;
  double mean_dice = 0.0;
  std::optional<double> mean_asd;
  std::vector<std::uint8_t> asd_skipped;
};

// 2|A n B| / (|A| + |B|) over the masks of `cls`; 1.0 when both are empty.
double dice(const LabelVolume& pred, const LabelVolume& gt, std::uint8_t cls);

// Foreground voxels with a face-adjacent background neighbor or lying on the
// grid border, as physical voxel-center coordinates (x, y[, z] by axis order).
std::vector<Point3> surface_points(const Mask& mask);

// Symmetric average surface distance in mm. An empty `spacing` means the
// spacing carried by `gt`. Throws EmptySurface when either mask is empty.
double asd(const LabelVolume& pred, const LabelVolume& gt, std::uint8_t cls,
           const std::vector<double>& spacing = {});

MetricsReport evaluate(const LabelVolume& pred, const LabelVolume& gt,
                       const std::vector<double>& spacing = {});

}  // namespace sfseg
