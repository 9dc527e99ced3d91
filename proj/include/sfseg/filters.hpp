#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sfseg::filters {

// Symmetric reflection (d c b a | a b c d | d c b a) valid for any offset.
std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n);

// Sampled Gaussian of radius ceil(3 sigma), normalized to sum 1.
std::vector<double> gaussian_kernel(double sigma);

// Convolves `data` (C-order over `dims`) with `kernel` along one axis.
void convolve_axis(std::vector<double>& data, std::span<const std::size_t> dims,
                   std::size_t axis, std::span<const double> kernel);

// Separable Gaussian over every axis with reflective borders.
void gaussian_blur(std::vector<double>& data, std::span<const std::size_t> dims,
                   double sigma);

}  // namespace sfseg::filters
