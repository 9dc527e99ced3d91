#include "sfseg/filters.hpp"

#include <cmath>

namespace sfseg::filters {

std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) {
  const std::ptrdiff_t period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

void convolve_axis(std::vector<double>& data, std::span<const std::size_t> dims,
                   std::size_t axis, std::span<const double> kernel) {
  std::size_t inner = 1;
  for (std::size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
  std::size_t outer = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= dims[a];
  const auto n = static_cast<std::ptrdiff_t>(dims[axis]);
  const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);

  std::vector<double> line(dims[axis]);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * dims[axis] * inner + in;
      for (std::ptrdiff_t i = 0; i < n; ++i) line[i] = data[base + i * inner];
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
          acc += kernel[k + radius] * line[reflect_index(i + k, n)];
        }
        data[base + i * inner] = acc;
      }
    }
  }
}

void gaussian_blur(std::vector<double>& data, std::span<const std::size_t> dims,
                   double sigma) {
  const auto kernel = gaussian_kernel(sigma);
  for (std::size_t axis = 0; axis < dims.size(); ++axis) {
    convolve_axis(data, dims, axis, kernel);
  }
}

}  // namespace sfseg::filters
