#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sfseg/grid.hpp"

namespace sfseg {

inline constexpr double kProbTolerance = 1e-4;
inline constexpr std::size_t kMaxClasses = 256;

// Per-voxel class probabilities P(c|v), stored class-major: the value for
// class c at voxel i lives at c * voxel_count + i.
class ProbVolume {
 public:
  // Validates range and per-voxel normalization.
  ProbVolume(GridShape shape, std::size_t classes, std::vector<float> values,
             double tolerance = kProbTolerance);

  const GridShape& shape() const noexcept { return shape_; }
  std::size_t classes() const noexcept { return classes_; }
  std::size_t voxel_count() const noexcept { return shape_.voxel_count(); }
  std::span<const float> values() const& noexcept { return values_; }
  std::span<const float> values() && = delete;
  std::span<const float> channel(std::size_t c) const&;
  std::span<const float> channel(std::size_t c) && = delete;
  float at(std::size_t c, std::size_t voxel) const {
    return values_[c * voxel_count() + voxel];
  }

  friend bool operator==(const ProbVolume&, const ProbVolume&) = default;

 private:
  GridShape shape_;
  std::size_t classes_;
  std::vector<float> values_;
};

// Integer class map; class 0 is background.
class LabelVolume {
 public:
  LabelVolume(GridShape shape, std::size_t classes,
              std::vector<std::uint8_t> values);

  const GridShape& shape() const noexcept { return shape_; }
  std::size_t classes() const noexcept { return classes_; }
  std::size_t voxel_count() const noexcept { return values_.size(); }
  std::span<const std::uint8_t> values() const& noexcept { return values_; }
  std::span<const std::uint8_t> values() && = delete;
  std::uint8_t operator[](std::size_t i) const { return values_[i]; }

  std::size_t foreground_count() const;
  Mask class_mask(std::uint8_t cls) const;

  friend bool operator==(const LabelVolume&, const LabelVolume&) = default;

 private:
  GridShape shape_;
  std::size_t classes_;
  std::vector<std::uint8_t> values_;
};

// Boolean 2D edge grid (values are 0 or 1).
class EdgeMap {
 public:
  EdgeMap(GridShape shape, std::vector<std::uint8_t> values);

  const GridShape& shape() const noexcept { return shape_; }
  std::span<const std::uint8_t> values() const& noexcept { return values_; }
  std::span<const std::uint8_t> values() && = delete;
  bool operator[](std::size_t i) const { return values_[i] != 0; }
  bool at(std::size_t y, std::size_t x) const {
    return values_[y * shape_[1] + x] != 0;
  }
  std::size_t count() const;

  friend bool operator==(const EdgeMap&, const EdgeMap&) = default;

 private:
  GridShape shape_;
  std::vector<std::uint8_t> values_;
};

// Per-voxel argmax over classes; ties go to the lowest class id.
LabelVolume argmax_labels(const ProbVolume& p);

ProbVolume one_hot(const LabelVolume& labels);

// Builds a ProbVolume from a raw C x [D x] H x W array.
ProbVolume validate_prob(std::span<const std::size_t> dims_with_classes,
                         std::vector<float> values, double tolerance,
                         std::vector<double> spacing = {});

}  // namespace sfseg
