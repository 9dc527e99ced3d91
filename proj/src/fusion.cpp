#include "sfseg/fusion.hpp"

namespace sfseg {
namespace {

void require_compatible(const LabelVolume& a, const LabelVolume& b) {
  require_same_grid(a.shape(), b.shape(), "fusion inputs");
  if (a.classes() != b.classes()) {
    fail(ErrorCode::ShapeMismatch, "fusion inputs disagree on class count");
  }
}

}  // namespace

SizeStats class_sizes(const LabelVolume& y) {
  std::vector<std::size_t> raw(y.classes(), 0);
  for (std::uint8_t v : y.values()) ++raw[v];

  SizeStats stats;
  double inverse_sum = 0.0;
  for (std::size_t c = 1; c < raw.size(); ++c) {
    if (raw[c] == 0) continue;
    const auto cls = static_cast<std::uint8_t>(c);
    stats.counts[cls] = raw[c];
    inverse_sum += 1.0 / static_cast<double>(raw[c]);
  }
  if (stats.counts.empty()) {
    fail(ErrorCode::NoForeground, "label map is entirely background");
  }
  stats.min_class = stats.counts.begin()->first;
  for (const auto& [cls, count] : stats.counts) {
    if (count < stats.counts[stats.min_class]) stats.min_class = cls;
    stats.lambdas[cls] = (1.0 / static_cast<double>(count)) / inverse_sum;
  }
  return stats;
}

LabelVolume size_aware_fuse(const LabelVolume& refined,
                            const LabelVolume& segmentation, FusionMode mode) {
  require_compatible(refined, segmentation);
  const SizeStats stats = class_sizes(refined);
  const std::uint8_t c_min = stats.min_class;
  const std::size_t n = refined.voxel_count();
  std::vector<std::uint8_t> out(n, 0);

  if (mode == FusionMode::Hard) {
    for (std::size_t i = 0; i < n; ++i) {
      if (refined[i] == c_min) {
        out[i] = c_min;
      } else if (segmentation[i] != c_min) {
        out[i] = segmentation[i];
      }
    }
  } else {
    const double lambda = stats.lambdas.at(c_min);
    for (std::size_t i = 0; i < n; ++i) {
      // Channel c_min comes only from `refined`; every other channel only
      // from `segmentation`. At most two channels are non-zero.
      const double refined_vote = refined[i] == c_min ? lambda : 0.0;
      const double seg_vote = segmentation[i] != c_min ? 1.0 - lambda : 0.0;
      const std::uint8_t seg_class = segmentation[i] != c_min ? segmentation[i] : 0;
      if (refined_vote > seg_vote ||
          (refined_vote == seg_vote && refined_vote > 0.0 && c_min < seg_class)) {
        out[i] = c_min;
      } else if (seg_vote > 0.0) {
        out[i] = seg_class;
      }
    }
  }
  return LabelVolume(refined.shape(), refined.classes(), std::move(out));
}

bool fusion_bypassed(const LabelVolume& refined) {
  return class_sizes(refined).counts.size() == 1;
}

LabelVolume fuse_or_bypass(const LabelVolume& refined,
                           const LabelVolume& segmentation, FusionMode mode) {
  require_compatible(refined, segmentation);
  if (fusion_bypassed(refined)) return segmentation;
  return size_aware_fuse(refined, segmentation, mode);
}

}  // namespace sfseg
