#include "sfseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sfseg {
namespace {

double mean_nearest(const std::vector<Point3>& from,
                    const std::vector<Point3>& to) {
  double total = 0.0;
  for (const Point3& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point3& q : to) {
      const double dx = p[0] - q[0], dy = p[1] - q[1], dz = p[2] - q[2];
      best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    total += std::sqrt(best);
  }
  return total / static_cast<double>(from.size());
}

Mask class_mask(const LabelVolume& y, std::uint8_t cls, const GridShape& shape) {
  std::vector<std::uint8_t> m(y.voxel_count());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = y[i] == cls;
  return Mask(shape, std::move(m));
}

}  // namespace

double dice(const LabelVolume& pred, const LabelVolume& gt, std::uint8_t cls) {
  require_same_grid(pred.shape(), gt.shape(), "dice");
  std::size_t a = 0, b = 0, both = 0;
  for (std::size_t i = 0; i < pred.voxel_count(); ++i) {
    const bool in_a = pred[i] == cls;
    const bool in_b = gt[i] == cls;
    a += in_a;
    b += in_b;
    both += in_a && in_b;
  }
  if (a + b == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(a + b);
}

std::vector<Point3> surface_points(const Mask& mask) {
  const GridShape& shape = mask.shape();
  const std::size_t rank = shape.rank();
  const auto strides = shape.strides();
  std::vector<Point3> points;
  std::vector<std::size_t> idx(rank, 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    std::size_t rem = i;
    for (std::size_t a = 0; a < rank; ++a) {
      idx[a] = rem / strides[a];
      rem %= strides[a];
    }
    if (!mask[i]) continue;
    bool surface = false;
    for (std::size_t a = 0; a < rank && !surface; ++a) {
      if (idx[a] == 0 || idx[a] + 1 == shape[a]) {
        surface = true;
      } else if (!mask[i - strides[a]] || !mask[i + strides[a]]) {
        surface = true;
      }
    }
    if (!surface) continue;
    Point3 p{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < rank; ++a) {
      p[a] = static_cast<double>(idx[a]) * shape.spacing()[a];
    }
    points.push_back(p);
  }
  return points;
}

double asd(const LabelVolume& pred, const LabelVolume& gt, std::uint8_t cls,
           const std::vector<double>& spacing) {
  require_same_grid(pred.shape(), gt.shape(), "asd");
  const GridShape shape =
      gt.shape().with_spacing(spacing.empty() ? gt.shape().spacing() : spacing);
  const auto a = surface_points(class_mask(pred, cls, shape));
  const auto b = surface_points(class_mask(gt, cls, shape));
  if (a.empty() || b.empty()) {
    fail(ErrorCode::EmptySurface,
         "class " + std::to_string(cls) + " is empty in one of the inputs");
  }
  return 0.5 * (mean_nearest(a, b) + mean_nearest(b, a));
}

MetricsReport evaluate(const LabelVolume& pred, const LabelVolume& gt,
                       const std::vector<double>& spacing) {
  require_same_grid(pred.shape(), gt.shape(), "evaluate");
  const std::size_t classes = std::max(pred.classes(), gt.classes());
  MetricsReport report;
  double dice_sum = 0.0, asd_sum = 0.0;
  std::size_t asd_n = 0;
  for (std::size_t c = 1; c < classes; ++c) {
    const auto cls = static_cast<std::uint8_t>(c);
    ClassMetrics m;
    m.dice = dice(pred, gt, cls);
    try {
      m.asd = asd(pred, gt, cls, spacing);
      asd_sum += *m.asd;
      ++asd_n;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptySurface) throw;
      report.asd_skipped.push_back(cls);
    }
    dice_sum += m.dice;
    report.per_class[cls] = m;
  }
  if (!report.per_class.empty()) {
    report.mean_dice = dice_sum / static_cast<double>(report.per_class.size());
  }
  if (asd_n > 0) report.mean_asd = asd_sum / static_cast<double>(asd_n);
  return report;
}

}  // namespace sfseg
