#include "sfseg/uncertainty.hpp"

#include <algorithm>
#include <cmath>

namespace sfseg {

ScalarField voxel_entropy(const ProbVolume& p) {
  const std::size_t n = p.voxel_count();
  std::vector<double> h(n, 0.0);
  for (std::size_t c = 0; c < p.classes(); ++c) {
    const auto channel = p.channel(c);
    for (std::size_t i = 0; i < n; ++i) {
      const double q = channel[i];
      if (q > 0.0) h[i] -= q * std::log2(q);
    }
  }
  // Float inputs within the normalization tolerance can land a hair outside
  // the exact bounds.
  const double upper = std::log2(static_cast<double>(p.classes()));
  for (double& v : h) v = std::clamp(v, 0.0, upper);
  return ScalarField(p.shape(), std::move(h));
}

ScalarField regional_entropy(const ScalarField& h, std::size_t classes) {
  const GridShape& shape = h.shape();
  // Treat 2D as a single-plane 3D grid.
  const std::size_t d = shape.rank() == 3 ? shape[0] : 1;
  const std::size_t rows = shape[shape.rank() - 2];
  const std::size_t cols = shape[shape.rank() - 1];
  const double norm = std::log2(static_cast<double>(classes));

  auto window = [](std::size_t i, std::size_t n) {
    return std::pair{i == 0 ? 0 : i - 1, std::min(i + 1, n - 1)};
  };

  std::vector<double> e(h.size());
  for (std::size_t z = 0; z < d; ++z) {
    const auto [z0, z1] = window(z, d);
    for (std::size_t y = 0; y < rows; ++y) {
      const auto [y0, y1] = window(y, rows);
      for (std::size_t x = 0; x < cols; ++x) {
        const auto [x0, x1] = window(x, cols);
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t zz = z0; zz <= z1; ++zz) {
          for (std::size_t yy = y0; yy <= y1; ++yy) {
            for (std::size_t xx = x0; xx <= x1; ++xx) {
              sum += h[(zz * rows + yy) * cols + xx];
              ++count;
            }
          }
        }
        e[(z * rows + y) * cols + x] =
            std::clamp(sum / static_cast<double>(count) / norm, 0.0, 1.0);
      }
    }
  }
  return ScalarField(shape, std::move(e));
}

LabelVolume entropy_mask(const LabelVolume& y, const ScalarField& h,
                         double tau1) {
  require_same_grid(y.shape(), h.shape(), "entropy_mask");
  std::vector<std::uint8_t> out(y.values().begin(), y.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(h[i] <= tau1)) out[i] = 0;
  }
  return LabelVolume(y.shape(), y.classes(), std::move(out));
}

}  // namespace sfseg
