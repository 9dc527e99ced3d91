#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfseg/error.hpp"

namespace sfseg {

// Extents and physical spacing of a 2D ([H, W]) or 3D ([D, H, W]) voxel grid.
// Storage everywhere in the library is C-order over these extents.
class GridShape {
 public:
  explicit GridShape(std::vector<std::size_t> dims,
                     std::vector<double> spacing = {});

  std::size_t rank() const noexcept { return dims_.size(); }
  std::size_t operator[](std::size_t axis) const { return dims_.at(axis); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const std::vector<double>& spacing() const noexcept { return spacing_; }
  std::size_t voxel_count() const noexcept;
  std::vector<std::size_t> strides() const;

  // Same extents; spacing is metadata and does not affect compatibility.
  bool same_grid(const GridShape& other) const noexcept {
    return dims_ == other.dims_;
  }

  GridShape with_spacing(std::vector<double> spacing) const {
    return GridShape(dims_, std::move(spacing));
  }

  std::string to_string() const;

  friend bool operator==(const GridShape&, const GridShape&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> spacing_;
};

void require_same_grid(const GridShape& a, const GridShape& b,
                       const char* what);

// Immutable per-voxel array over a grid.
template <typename T>
class Field {
 public:
  using value_type = T;

  Field(GridShape shape, std::vector<T> values)
      : shape_(std::move(shape)), values_(std::move(values)) {
    if (values_.size() != shape_.voxel_count()) {
      fail(ErrorCode::ShapeMismatch,
           "field holds " + std::to_string(values_.size()) +
               " values for grid " + shape_.to_string());
    }
  }

  const GridShape& shape() const noexcept { return shape_; }
  std::span<const T> values() const& noexcept { return values_; }
  std::span<const T> values() && = delete;
  std::size_t size() const noexcept { return values_.size(); }
  const T& operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  GridShape shape_;
  std::vector<T> values_;
};

using ScalarField = Field<double>;
using Image = Field<float>;
using Mask = Field<std::uint8_t>;

// Number of 2D slices obtained by indexing the last axis (1 for 2D grids).
std::size_t slice_count(const GridShape& shape);

// Shape of one slice taken at a fixed index of the last axis.
GridShape slice_shape(const GridShape& shape);

// Copies the 2D slice at `index` of the last axis. A 2D grid is its own
// single slice.
template <typename T>
std::vector<T> extract_slice(const GridShape& shape, std::span<const T> values,
                             std::size_t index) {
  if (shape.rank() == 2) {
    return std::vector<T>(values.begin(), values.end());
  }
  const std::size_t d = shape[0], h = shape[1], w = shape[2];
  std::vector<T> out;
  out.reserve(d * h);
  for (std::size_t z = 0; z < d; ++z) {
    for (std::size_t y = 0; y < h; ++y) {
      out.push_back(values[(z * h + y) * w + index]);
    }
  }
  return out;
}

}  // namespace sfseg
