#include "sfseg/core_types.hpp"

#include <algorithm>
#include <cmath>

namespace sfseg {

ProbVolume::ProbVolume(GridShape shape, std::size_t classes,
                       std::vector<float> values, double tolerance)
    : shape_(std::move(shape)), classes_(classes), values_(std::move(values)) {
  if (classes_ < 2 || classes_ > kMaxClasses) {
    fail(ErrorCode::BadRank,
         "class count must be in [2, 256], got " + std::to_string(classes_));
  }
  const std::size_t n = shape_.voxel_count();
  if (values_.size() != n * classes_) {
    fail(ErrorCode::ShapeMismatch, "probability array size does not match " +
                                       std::to_string(classes_) + " x " +
                                       shape_.to_string());
  }
  for (float v : values_) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      fail(ErrorCode::OutOfRange,
           "probability " + std::to_string(v) + " outside [0, 1]");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < classes_; ++c) sum += values_[c * n + i];
    if (std::abs(sum - 1.0) > tolerance) {
      fail(ErrorCode::NotNormalized, "voxel " + std::to_string(i) +
                                         " sums to " + std::to_string(sum));
    }
  }
}

std::span<const float> ProbVolume::channel(std::size_t c) const& {
  const std::size_t n = voxel_count();
  return std::span<const float>(values_).subspan(c * n, n);
}

LabelVolume::LabelVolume(GridShape shape, std::size_t classes,
                         std::vector<std::uint8_t> values)
    : shape_(std::move(shape)), classes_(classes), values_(std::move(values)) {
  if (classes_ < 2 || classes_ > kMaxClasses) {
    fail(ErrorCode::OutOfRange,
         "class count must be in [2, 256], got " + std::to_string(classes_));
  }
  if (values_.size() != shape_.voxel_count()) {
    fail(ErrorCode::ShapeMismatch,
         "label array size does not match " + shape_.to_string());
  }
  for (std::uint8_t v : values_) {
    if (v >= classes_) {
      fail(ErrorCode::OutOfRange, "label " + std::to_string(v) +
                                      " not below class count " +
                                      std::to_string(classes_));
    }
  }
}

std::size_t LabelVolume::foreground_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(),
                    [](std::uint8_t v) { return v != 0; }));
}

Mask LabelVolume::class_mask(std::uint8_t cls) const {
  std::vector<std::uint8_t> m(values_.size());
  std::transform(values_.begin(), values_.end(), m.begin(),
                 [cls](std::uint8_t v) -> std::uint8_t { return v == cls; });
  return Mask(shape_, std::move(m));
}

EdgeMap::EdgeMap(GridShape shape, std::vector<std::uint8_t> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_.rank() != 2) fail(ErrorCode::BadRank, "edge maps are 2D");
  if (values_.size() != shape_.voxel_count()) {
    fail(ErrorCode::ShapeMismatch,
         "edge array size does not match " + shape_.to_string());
  }
  for (auto& v : values_) v = v ? 1 : 0;
}

std::size_t EdgeMap::count() const {
  return static_cast<std::size_t>(
      std::count(values_.begin(), values_.end(), std::uint8_t{1}));
}

LabelVolume argmax_labels(const ProbVolume& p) {
  const std::size_t n = p.voxel_count();
  std::vector<std::uint8_t> labels(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    float best = p.at(0, i);
    std::size_t best_c = 0;
    for (std::size_t c = 1; c < p.classes(); ++c) {
      if (p.at(c, i) > best) {
        best = p.at(c, i);
        best_c = c;
      }
    }
    labels[i] = static_cast<std::uint8_t>(best_c);
  }
  return LabelVolume(p.shape(), p.classes(), std::move(labels));
}

ProbVolume one_hot(const LabelVolume& labels) {
  const std::size_t n = labels.voxel_count();
  std::vector<float> values(n * labels.classes(), 0.0f);
  for (std::size_t i = 0; i < n; ++i) values[labels[i] * n + i] = 1.0f;
  return ProbVolume(labels.shape(), labels.classes(), std::move(values));
}

ProbVolume validate_prob(std::span<const std::size_t> dims_with_classes,
                         std::vector<float> values, double tolerance,
                         std::vector<double> spacing) {
  if (dims_with_classes.size() != 3 && dims_with_classes.size() != 4) {
    fail(ErrorCode::BadRank,
         "probability arrays are C x [D x] H x W, got rank " +
             std::to_string(dims_with_classes.size()));
  }
  std::vector<std::size_t> dims(dims_with_classes.begin() + 1,
                                dims_with_classes.end());
  return ProbVolume(GridShape(std::move(dims), std::move(spacing)),
                    dims_with_classes[0], std::move(values), tolerance);
}

}  // namespace sfseg
