#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sfseg/core_types.hpp"

namespace sfseg::npy {

// A raw NPY 1.0 array: dtype descriptor, C-order shape, little-endian bytes.
struct RawArray {
  std::string descr;
  std::vector<std::size_t> shape;
  std::vector<unsigned char> data;
};

// Parses an NPY 1.0 file. Throws IoError or BadHeader; Fortran order is a
// BadHeader since every consumer expects C order.
RawArray read_raw(const std::filesystem::path& path);

// Header padded with spaces to a 64-byte boundary, terminated by '\n'.
std::string make_header(const std::string& descr,
                        const std::vector<std::size_t>& shape);
void write_raw(const std::filesystem::path& path, const RawArray& array);

// Typed readers validate dtype, rank and the target type's invariants.
// Probability files are C x [D x] H x W float32.
ProbVolume read_prob(const std::filesystem::path& path,
                     double tolerance = kProbTolerance);
// Label files are [D x] H x W uint8. When `classes` is absent the class count
// is max(label) + 1 (at least 2).
LabelVolume read_labels(const std::filesystem::path& path,
                        std::optional<std::size_t> classes = std::nullopt);
Image read_image(const std::filesystem::path& path);
EdgeMap read_edges(const std::filesystem::path& path);

void write_array(const std::filesystem::path& path, const ProbVolume& p);
void write_array(const std::filesystem::path& path, const LabelVolume& y);
void write_array(const std::filesystem::path& path, const Image& img);
void write_array(const std::filesystem::path& path, const EdgeMap& edges);
// Scalar fields are stored as float32.
void write_array(const std::filesystem::path& path, const ScalarField& field);

}  // namespace sfseg::npy
