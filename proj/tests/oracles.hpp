#pragma once

// Straight-line reference implementations used only by tests. They share no
// code with the library beyond the container types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "sfseg/core_types.hpp"
#include "sfseg/rng.hpp"

namespace oracle {

inline double entropy_bits(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h += -p * std::log(p) / std::log(2.0);
  }
  return h;
}

// Random normalized probability volume; `peaked` sharpens the distribution.
inline sfseg::ProbVolume random_prob(sfseg::Rng& rng, std::vector<std::size_t> dims,
                                     std::size_t classes, double peaked = 1.0) {
  sfseg::GridShape shape(dims);
  const std::size_t n = shape.voxel_count();
  std::vector<float> values(n * classes);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> w(classes);
    double sum = 0.0;
    for (auto& x : w) {
      x = std::pow(rng.uniform() + 1e-12, peaked);
      sum += x;
    }
    for (std::size_t c = 0; c < classes; ++c) {
      values[c * n + i] = static_cast<float>(w[c] / sum);
    }
  }
  return sfseg::ProbVolume(shape, classes, std::move(values));
}

inline sfseg::LabelVolume random_labels(sfseg::Rng& rng, std::vector<std::size_t> dims,
                                        std::size_t classes) {
  sfseg::GridShape shape(dims);
  std::vector<std::uint8_t> v(shape.voxel_count());
  for (auto& x : v) x = static_cast<std::uint8_t>(rng.below(classes));
  return sfseg::LabelVolume(shape, classes, std::move(v));
}

inline sfseg::EdgeMap random_edges(sfseg::Rng& rng, std::size_t rows, std::size_t cols,
                                   double density) {
  std::vector<std::uint8_t> v(rows * cols);
  for (auto& x : v) x = rng.uniform() < density;
  return sfseg::EdgeMap(sfseg::GridShape({rows, cols}), std::move(v));
}

// Structural consistency by an explicit double loop over pixel pairs.
inline std::pair<std::size_t, std::size_t> consistency_counts(const sfseg::EdgeMap& cand,
                                                              const sfseg::EdgeMap& cond,
                                                              int r) {
  const auto rows = static_cast<long>(cond.shape()[0]);
  const auto cols = static_cast<long>(cond.shape()[1]);
  std::size_t matched = 0, total = 0;
  for (long py = 0; py < rows; ++py) {
    for (long px = 0; px < cols; ++px) {
      if (!cond.at(py, px)) continue;
      ++total;
      bool hit = false;
      for (long qy = 0; qy < rows && !hit; ++qy) {
        for (long qx = 0; qx < cols && !hit; ++qx) {
          if (cand.at(qy, qx) && std::max(std::labs(py - qy), std::labs(px - qx)) <= r) {
            hit = true;
          }
        }
      }
      matched += hit;
    }
  }
  return {matched, total};
}

inline double dice(const sfseg::LabelVolume& a, const sfseg::LabelVolume& b, int cls) {
  double inter = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.voxel_count(); ++i) {
    na += a[i] == cls;
    nb += b[i] == cls;
    inter += a[i] == cls && b[i] == cls;
  }
  return na + nb == 0 ? 1.0 : 2 * inter / (na + nb);
}

// Surface voxels found by testing all 2*rank face neighbors explicitly.
inline std::vector<std::array<double, 3>> surface(const sfseg::LabelVolume& y, int cls,
                                                  const std::vector<double>& spacing) {
  const auto& dims = y.shape().dims();
  const std::size_t rank = dims.size();
  std::vector<std::array<double, 3>> pts;
  const long D = rank == 3 ? static_cast<long>(dims[0]) : 1;
  const long H = static_cast<long>(dims[rank - 2]);
  const long W = static_cast<long>(dims[rank - 1]);
  auto at = [&](long z, long r, long c) { return y[(z * H + r) * W + c] == cls; };
  for (long z = 0; z < D; ++z)
    for (long r = 0; r < H; ++r)
      for (long c = 0; c < W; ++c) {
        if (!at(z, r, c)) continue;
        bool border = r == 0 || r == H - 1 || c == 0 || c == W - 1 ||
                      (rank == 3 && (z == 0 || z == D - 1));
        bool open = border;
        if (!open) {
          open = !at(z, r - 1, c) || !at(z, r + 1, c) || !at(z, r, c - 1) || !at(z, r, c + 1);
          if (rank == 3) open = open || !at(z - 1, r, c) || !at(z + 1, r, c);
        }
        if (!open) continue;
        if (rank == 3) {
          pts.push_back({z * spacing[0], r * spacing[1], c * spacing[2]});
        } else {
          pts.push_back({r * spacing[0], c * spacing[1], 0.0});
        }
      }
  return pts;
}

inline double asd(const sfseg::LabelVolume& a, const sfseg::LabelVolume& b, int cls,
                  const std::vector<double>& spacing) {
  const auto sa = surface(a, cls, spacing);
  const auto sb = surface(b, cls, spacing);
  auto directed = [](const auto& from, const auto& to) {
    double sum = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        best = std::min(best, std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]));
      }
      sum += best;
    }
    return sum / static_cast<double>(from.size());
  };
  return 0.5 * (directed(sa, sb) + directed(sb, sa));
}

}  // namespace oracle
