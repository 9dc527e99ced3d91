#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sfseg/config.hpp"
#include "sfseg/core_types.hpp"

namespace sfseg {

// Separable Gaussian blur, kernel radius ceil(3 sigma), reflective borders.
Image gaussian_blur(const Image& img, double sigma);

// Canny edge detector on a 2D image with intensities in [0, 1]:
// blur, 3x3 Sobel, magnitude normalized by its maximum, 4-direction
// non-maximum suppression, double threshold and 8-connected hysteresis.
EdgeMap canny(const Image& img, const CannyParams& params);

// Canny on a 2D label slice rendered as class_id / (C - 1).
EdgeMap label_edge_map(const LabelVolume& slice, const CannyParams& params);

struct EdgeMatch {
  std::size_t matched = 0;
  std::size_t condition_edges = 0;
};

// Counts condition edge pixels with a candidate edge pixel within Chebyshev
// distance `align_radius` (exact overlap when the radius is 0). Never throws
// on empty maps, so counts can be pooled across slices.
EdgeMatch match_edges(const EdgeMap& candidate, const EdgeMap& condition,
                      int align_radius);

struct CandidateScore {
  std::size_t index = 0;
  double score = 0.0;  // matched / condition_edges
  std::size_t matched = 0;
  std::size_t condition_edges = 0;
};

// Structural consistency of one candidate edge map against the condition's.
// Throws EmptyConditionEdges when the condition has no edges.
CandidateScore consistency_score(const EdgeMap& candidate,
                                 const EdgeMap& condition, int align_radius);

struct Selection {
  std::size_t best_index = 0;
  std::vector<CandidateScore> scores;
};

// Scores every candidate against the condition labels and returns the
// highest-scoring one (lowest index on ties). 3D volumes are scored slice by
// slice along the last axis with counts pooled before the ratio.
Selection select_best(std::span<const Image> candidates,
                      const LabelVolume& condition, const PipelineConfig& cfg);

}  // namespace sfseg
