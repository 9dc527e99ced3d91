#include "sfseg/grid.hpp"

#include <cmath>
#include <functional>
#include <numeric>

namespace sfseg {

GridShape::GridShape(std::vector<std::size_t> dims, std::vector<double> spacing)
    : dims_(std::move(dims)), spacing_(std::move(spacing)) {
  if (dims_.size() != 2 && dims_.size() != 3) {
    fail(ErrorCode::BadRank,
         "grids are 2D or 3D, got rank " + std::to_string(dims_.size()));
  }
  for (std::size_t extent : dims_) {
    if (extent == 0) fail(ErrorCode::BadRank, "zero extent in grid");
  }
  if (spacing_.empty()) spacing_.assign(dims_.size(), 1.0);
  if (spacing_.size() != dims_.size()) {
    fail(ErrorCode::BadParams, "spacing rank does not match grid rank");
  }
  for (double s : spacing_) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      fail(ErrorCode::BadParams, "spacing must be positive and finite");
    }
  }
}

std::size_t GridShape::voxel_count() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1},
                         std::multiplies<>());
}

std::vector<std::size_t> GridShape::strides() const {
  std::vector<std::size_t> s(dims_.size(), 1);
  for (std::size_t i = dims_.size() - 1; i > 0; --i) {
    s[i - 1] = s[i] * dims_[i];
  }
  return s;
}

std::string GridShape::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(dims_[i]);
  }
  return out + ")";
}

void require_same_grid(const GridShape& a, const GridShape& b,
                       const char* what) {
  if (!a.same_grid(b)) {
    fail(ErrorCode::ShapeMismatch, std::string(what) + ": " + a.to_string() +
                                       " vs " + b.to_string());
  }
}

std::size_t slice_count(const GridShape& shape) {
  return shape.rank() == 2 ? 1 : shape[2];
}

GridShape slice_shape(const GridShape& shape) {
  if (shape.rank() == 2) return shape;
  return GridShape({shape[0], shape[1]}, {shape.spacing()[0], shape.spacing()[1]});
}

}  // namespace sfseg
