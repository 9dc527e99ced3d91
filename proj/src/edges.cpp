#include "sfseg/edges.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "sfseg/filters.hpp"

namespace sfseg {
namespace {

constexpr double kTan22_5 = 0.41421356237309503;
// Magnitudes closer than this (after max-normalization) count as equal in
// non-maximum suppression.
constexpr double kTieTolerance = 1e-9;

void require_2d(const GridShape& shape, const char* what) {
  if (shape.rank() != 2) {
    fail(ErrorCode::BadRank, std::string(what) + " expects a 2D grid, got " +
                                 shape.to_string());
  }
}

std::vector<double> blurred(const Image& img, double sigma) {
  std::vector<double> data(img.values().begin(), img.values().end());
  filters::gaussian_blur(data, img.shape().dims(), sigma);
  return data;
}

}  // namespace

Image gaussian_blur(const Image& img, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorCode::BadParams, "sigma must be > 0");
  const auto data = blurred(img, sigma);
  return Image(img.shape(), std::vector<float>(data.begin(), data.end()));
}

EdgeMap canny(const Image& img, const CannyParams& params) {
  params.validate();
  require_2d(img.shape(), "canny");
  const auto rows = static_cast<std::ptrdiff_t>(img.shape()[0]);
  const auto cols = static_cast<std::ptrdiff_t>(img.shape()[1]);
  const auto n = static_cast<std::size_t>(rows * cols);
  const auto smooth = blurred(img, params.sigma);

  auto px = [&](std::ptrdiff_t y, std::ptrdiff_t x) {
    return smooth[filters::reflect_index(y, rows) * cols +
                  filters::reflect_index(x, cols)];
  };

  std::vector<double> gx(n), gy(n), mag(n);
  double max_mag = 0.0;
  for (std::ptrdiff_t y = 0; y < rows; ++y) {
    for (std::ptrdiff_t x = 0; x < cols; ++x) {
      const std::size_t i = y * cols + x;
      gx[i] = (px(y - 1, x + 1) + 2.0 * px(y, x + 1) + px(y + 1, x + 1)) -
              (px(y - 1, x - 1) + 2.0 * px(y, x - 1) + px(y + 1, x - 1));
      gy[i] = (px(y + 1, x - 1) + 2.0 * px(y + 1, x) + px(y + 1, x + 1)) -
              (px(y - 1, x - 1) + 2.0 * px(y - 1, x) + px(y - 1, x + 1));
      mag[i] = std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
      max_mag = std::max(max_mag, mag[i]);
    }
  }
  std::vector<std::uint8_t> edges(n, 0);
  if (max_mag == 0.0) return EdgeMap(img.shape(), std::move(edges));
  for (double& m : mag) m /= max_mag;

  auto mag_at = [&](std::ptrdiff_t y, std::ptrdiff_t x) {
    if (y < 0 || y >= rows || x < 0 || x >= cols) return 0.0;
    return mag[y * cols + x];
  };

  // 0 = not an edge candidate, 1 = weak, 2 = strong.
  std::vector<std::uint8_t> level(n, 0);
  for (std::ptrdiff_t y = 0; y < rows; ++y) {
    for (std::ptrdiff_t x = 0; x < cols; ++x) {
      const std::size_t i = y * cols + x;
      const double m = mag[i];
      if (m < params.low) continue;
      const double ax = std::abs(gx[i]);
      const double ay = std::abs(gy[i]);
      // (dy, dx) points to the neighbor that comes later in raster order.
      std::ptrdiff_t dy = 0, dx = 1;
      if (ay <= kTan22_5 * ax) {
        dy = 0, dx = 1;
      } else if (ax <= kTan22_5 * ay) {
        dy = 1, dx = 0;
      } else if ((gx[i] > 0) == (gy[i] > 0)) {
        dy = 1, dx = 1;
      } else {
        dy = 1, dx = -1;
      }
      const double forward = mag_at(y + dy, x + dx);
      const double backward = mag_at(y - dy, x - dx);
      // Plateaus keep only their earliest pixel in raster order.
      if (m >= forward - kTieTolerance && m > backward + kTieTolerance) {
        level[i] = m >= params.high ? 2 : 1;
      }
    }
  }

  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (level[i] == 2) {
      edges[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const auto y = static_cast<std::ptrdiff_t>(i) / cols;
    const auto x = static_cast<std::ptrdiff_t>(i) % cols;
    for (std::ptrdiff_t ny = y - 1; ny <= y + 1; ++ny) {
      for (std::ptrdiff_t nx = x - 1; nx <= x + 1; ++nx) {
        if (ny < 0 || ny >= rows || nx < 0 || nx >= cols) continue;
        const std::size_t j = ny * cols + nx;
        if (level[j] == 1 && !edges[j]) {
          edges[j] = 1;
          queue.push_back(j);
        }
      }
    }
  }
  return EdgeMap(img.shape(), std::move(edges));
}

EdgeMap label_edge_map(const LabelVolume& slice, const CannyParams& params) {
  require_2d(slice.shape(), "label_edge_map");
  const double scale = 1.0 / static_cast<double>(slice.classes() - 1);
  std::vector<float> intensity(slice.voxel_count());
  for (std::size_t i = 0; i < intensity.size(); ++i) {
    intensity[i] = static_cast<float>(slice[i] * scale);
  }
  return canny(Image(slice.shape(), std::move(intensity)), params);
}

EdgeMatch match_edges(const EdgeMap& candidate, const EdgeMap& condition,
                      int align_radius) {
  require_same_grid(candidate.shape(), condition.shape(), "match_edges");
  if (align_radius < 0) fail(ErrorCode::BadParams, "align_radius must be >= 0");
  const auto rows = static_cast<std::ptrdiff_t>(condition.shape()[0]);
  const auto cols = static_cast<std::ptrdiff_t>(condition.shape()[1]);
  const std::ptrdiff_t r = align_radius;

  // Square dilation of the candidate map, done as two 1D max passes.
  std::vector<std::uint8_t> reach(candidate.values().begin(),
                                  candidate.values().end());
  if (r > 0) {
    std::vector<std::uint8_t> tmp(reach.size(), 0);
    for (std::ptrdiff_t y = 0; y < rows; ++y) {
      for (std::ptrdiff_t x = 0; x < cols; ++x) {
        for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(0, x - r);
             k <= std::min(cols - 1, x + r); ++k) {
          if (reach[y * cols + k]) {
            tmp[y * cols + x] = 1;
            break;
          }
        }
      }
    }
    std::fill(reach.begin(), reach.end(), 0);
    for (std::ptrdiff_t y = 0; y < rows; ++y) {
      for (std::ptrdiff_t x = 0; x < cols; ++x) {
        for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(0, y - r);
             k <= std::min(rows - 1, y + r); ++k) {
          if (tmp[k * cols + x]) {
            reach[y * cols + x] = 1;
            break;
          }
        }
      }
    }
  }

  EdgeMatch match;
  const auto cond = condition.values();
  for (std::size_t i = 0; i < cond.size(); ++i) {
    if (!cond[i]) continue;
    ++match.condition_edges;
    if (reach[i]) ++match.matched;
  }
  return match;
}

CandidateScore consistency_score(const EdgeMap& candidate,
                                 const EdgeMap& condition, int align_radius) {
  const EdgeMatch m = match_edges(candidate, condition, align_radius);
  if (m.condition_edges == 0) {
    fail(ErrorCode::EmptyConditionEdges, "condition edge map is empty");
  }
  return CandidateScore{0,
                        static_cast<double>(m.matched) /
                            static_cast<double>(m.condition_edges),
                        m.matched, m.condition_edges};
}

Selection select_best(std::span<const Image> candidates,
                      const LabelVolume& condition, const PipelineConfig& cfg) {
  cfg.validate();
  if (candidates.empty()) {
    fail(ErrorCode::BadParams, "select_best needs at least one candidate");
  }
  for (const Image& c : candidates) {
    require_same_grid(c.shape(), condition.shape(), "select_best candidate");
  }

  const GridShape& shape = condition.shape();
  const GridShape plane = slice_shape(shape);
  const std::size_t slices = slice_count(shape);

  std::vector<EdgeMap> condition_edges;
  condition_edges.reserve(slices);
  std::size_t total_condition = 0;
  for (std::size_t k = 0; k < slices; ++k) {
    LabelVolume slice(plane, condition.classes(),
                      extract_slice(shape, condition.values(), k));
    condition_edges.push_back(label_edge_map(slice, cfg.canny));
    total_condition += condition_edges.back().count();
  }
  if (total_condition == 0) {
    fail(ErrorCode::EmptyConditionEdges, "condition labels have no edges");
  }

  Selection result;
  for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
    CandidateScore s{idx, 0.0, 0, 0};
    for (std::size_t k = 0; k < slices; ++k) {
      Image slice(plane, extract_slice(shape, candidates[idx].values(), k));
      const EdgeMatch m =
          match_edges(canny(slice, cfg.canny), condition_edges[k], cfg.align_radius);
      s.matched += m.matched;
      s.condition_edges += m.condition_edges;
    }
    s.score = static_cast<double>(s.matched) /
              static_cast<double>(s.condition_edges);
    result.scores.push_back(s);
  }
  for (const CandidateScore& s : result.scores) {
    if (s.score > result.scores[result.best_index].score) {
      result.best_index = s.index;
    }
  }
  return result;
}

}  // namespace sfseg
