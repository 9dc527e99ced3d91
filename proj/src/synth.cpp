#include "sfseg/synth.hpp"

#include <algorithm>
#include <cmath>

#include "sfseg/filters.hpp"
#include "sfseg/rng.hpp"

namespace sfseg {
namespace {

constexpr double kMinIntensityGap = 0.15;
constexpr std::size_t kJitterLattice = 4;  // voxels between displacement nodes

[[noreturn]] void bad_spec(const std::string& message) { fail(ErrorCode::BadSpec, message); }

// Extents padded to three axes, leading axis 1 for 2D.
std::array<std::size_t, 3> dims3(const GridShape& shape) {
  if (shape.rank() == 2) return {1, shape[0], shape[1]};
  return {shape[0], shape[1], shape[2]};
}

std::vector<double> resolve_intensities(const std::vector<double>& given,
                                        std::size_t classes) {
  std::vector<double> values =
      given.empty() ? default_class_intensities(classes) : given;
  if (values.size() < classes) {
    bad_spec("need one intensity per class");
  }
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) bad_spec("class intensities must lie in [0, 1]");
  }
  for (std::size_t a = 0; a < classes; ++a) {
    for (std::size_t b = a + 1; b < classes; ++b) {
      if (std::abs(values[a] - values[b]) < kMinIntensityGap) {
        bad_spec("class intensities must differ by at least 0.15");
      }
    }
  }
  return values;
}

}  // namespace

std::vector<double> default_class_intensities(std::size_t classes) {
  std::vector<double> out(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    out[c] = 0.1 + 0.8 * static_cast<double>(c) / static_cast<double>(classes - 1);
  }
  return out;
}

Phantom make_phantom(const PhantomSpec& spec) {
  const GridShape& shape = spec.shape;
  const std::size_t rank = shape.rank();
  if (spec.classes < 2 || spec.classes > 4) bad_spec("phantoms have 2 to 4 classes");
  if (spec.nesting.size() != spec.classes - 1) {
    bad_spec("need one nesting level per foreground class");
  }
  const auto intensities = resolve_intensities(spec.class_intensities, spec.classes);

  std::vector<std::vector<double>> axes;
  for (const auto& level : spec.nesting) {
    if (level.size() != 1 && level.size() != rank) {
      bad_spec("semi-axes must be a single radius or one per axis");
    }
    std::vector<double> a(rank, level.front());
    if (level.size() == rank) a = level;
    for (std::size_t k = 0; k < rank; ++k) {
      if (!(a[k] > 0.0)) bad_spec("semi-axes must be positive");
      if (a[k] > 0.5 * static_cast<double>(shape[k] - 1)) {
        bad_spec("ellipsoid does not fit in the volume");
      }
      if (!axes.empty() && !(a[k] < axes.back()[k])) {
        bad_spec("semi-axes must strictly decrease across nesting levels");
      }
    }
    axes.push_back(std::move(a));
  }

  Rng rng(spec.seed);
  std::vector<std::vector<double>> centers;
  for (std::size_t level = 0; level < axes.size(); ++level) {
    std::vector<double> c(rank);
    for (std::size_t k = 0; k < rank; ++k) {
      const double mid = 0.5 * static_cast<double>(shape[k] - 1);
      const double parent_center = level == 0 ? mid : centers[level - 1][k];
      const double parent_axis = level == 0 ? mid : axes[level - 1][k];
      const double slack = 0.5 * (parent_axis - axes[level][k]);
      c[k] = std::round(parent_center + rng.uniform(-slack, slack));
    }
    centers.push_back(std::move(c));
  }

  const auto strides = shape.strides();
  std::vector<std::uint8_t> labels(shape.voxel_count(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t level = 0; level < axes.size(); ++level) {
      double r2 = 0.0;
      std::size_t rem = i;
      for (std::size_t k = 0; k < rank; ++k) {
        const double x = static_cast<double>(rem / strides[k]);
        rem %= strides[k];
        const double u = (x - centers[level][k]) / axes[level][k];
        r2 += u * u;
      }
      if (r2 <= 1.0) labels[i] = static_cast<std::uint8_t>(level + 1);
    }
  }
  std::vector<std::size_t> counts(spec.classes, 0);
  for (auto v : labels) ++counts[v];
  for (std::size_t c = 1; c < spec.classes; ++c) {
    if (counts[c] == 0) bad_spec("class " + std::to_string(c) + " has no voxels");
  }

  std::vector<float> image(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    image[i] = static_cast<float>(intensities[labels[i]]);
  }
  LabelVolume lv(shape, spec.classes, std::move(labels));
  return Phantom{std::move(lv), Image(shape, std::move(image))};
}

ProbVolume corrupt_probmap(const LabelVolume& gt, const CorruptionSpec& spec) {
  if (!(spec.boundary_blur_sigma >= 0.0 && spec.logit_noise_std >= 0.0 &&
        spec.flip_rate >= 0.0 && spec.flip_rate <= 0.5 && spec.logit_scale > 0.0)) {
    bad_spec("corruption parameters out of range");
  }
  const std::size_t n = gt.voxel_count();
  const std::size_t classes = gt.classes();
  std::vector<std::vector<double>> logits(classes, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) logits[gt[i]][i] = spec.logit_scale;

  if (spec.boundary_blur_sigma > 0.0) {
    for (auto& channel : logits) {
      filters::gaussian_blur(channel, gt.shape().dims(), spec.boundary_blur_sigma);
    }
  }
  if (spec.logit_noise_std > 0.0) {
    Rng noise(split_seed(spec.seed, 0));
    for (auto& channel : logits) {
      for (double& l : channel) l += spec.logit_noise_std * noise.normal();
    }
  }
  if (spec.flip_rate > 0.0) {
    Rng flips(split_seed(spec.seed, 1));
    for (std::size_t i = 0; i < n; ++i) {
      if (!(flips.uniform() < spec.flip_rate)) continue;
      auto wrong = static_cast<std::size_t>(flips.below(classes - 1));
      if (wrong >= gt[i]) ++wrong;
      double top = logits[0][i];
      for (std::size_t c = 1; c < classes; ++c) top = std::max(top, logits[c][i]);
      logits[wrong][i] = top + flips.uniform(0.1, 1.0);
    }
  }

  std::vector<float> probs(n * classes);
  for (std::size_t i = 0; i < n; ++i) {
    double top = logits[0][i];
    for (std::size_t c = 1; c < classes; ++c) top = std::max(top, logits[c][i]);
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) sum += std::exp(logits[c][i] - top);
    for (std::size_t c = 0; c < classes; ++c) {
      probs[c * n + i] = static_cast<float>(std::exp(logits[c][i] - top) / sum);
    }
  }
  return ProbVolume(gt.shape(), classes, std::move(probs));
}

Image render_candidate(const LabelVolume& y, const RenderSpec& spec) {
  if (!(spec.quality >= 0.0 && spec.quality <= 1.0)) bad_spec("quality must be in [0, 1]");
  if (!(spec.noise_std >= 0.0 && spec.edge_jitter >= 0.0)) {
    bad_spec("noise_std and edge_jitter must be non-negative");
  }
  const auto intensities = resolve_intensities(spec.class_intensities, y.classes());
  const GridShape& shape = y.shape();
  const auto dims = dims3(shape);
  const std::size_t n = y.voxel_count();
  const double jitter = spec.edge_jitter * (1.0 - spec.quality);
  const double noise_std = spec.noise_std * (1.0 - spec.quality);

  std::vector<std::uint8_t> labels(y.values().begin(), y.values().end());
  if (jitter > 0.0) {
    // Displacement per axis on a coarse lattice, multilinearly interpolated.
    std::array<std::size_t, 3> nodes{};
    for (std::size_t k = 0; k < 3; ++k) nodes[k] = (dims[k] - 1) / kJitterLattice + 2;
    const std::size_t node_count = nodes[0] * nodes[1] * nodes[2];
    Rng rng(split_seed(spec.seed, 0));
    std::array<std::vector<double>, 3> field;
    for (std::size_t k = 0; k < 3; ++k) {
      field[k].resize(node_count);
      // The leading axis of a 2D grid is padding and never moves.
      const bool active = !(shape.rank() == 2 && k == 0);
      for (double& v : field[k]) v = active ? rng.uniform(-jitter, jitter) : 0.0;
    }
    auto node = [&](std::size_t a, std::size_t b, std::size_t c) {
      return (a * nodes[1] + b) * nodes[2] + c;
    };
    for (std::size_t z = 0; z < dims[0]; ++z) {
      for (std::size_t r = 0; r < dims[1]; ++r) {
        for (std::size_t c = 0; c < dims[2]; ++c) {
          const std::array<std::size_t, 3> pos{z, r, c};
          std::array<std::size_t, 3> base{};
          std::array<double, 3> frac{};
          for (std::size_t k = 0; k < 3; ++k) {
            base[k] = pos[k] / kJitterLattice;
            frac[k] = static_cast<double>(pos[k] % kJitterLattice) / kJitterLattice;
          }
          std::array<double, 3> disp{0.0, 0.0, 0.0};
          for (int corner = 0; corner < 8; ++corner) {
            const std::size_t a = base[0] + (corner >> 2 & 1);
            const std::size_t b = base[1] + (corner >> 1 & 1);
            const std::size_t cc = base[2] + (corner & 1);
            const double w = ((corner >> 2 & 1) ? frac[0] : 1.0 - frac[0]) *
                             ((corner >> 1 & 1) ? frac[1] : 1.0 - frac[1]) *
                             ((corner & 1) ? frac[2] : 1.0 - frac[2]);
            for (std::size_t k = 0; k < 3; ++k) disp[k] += w * field[k][node(a, b, cc)];
          }
          std::array<std::size_t, 3> src{};
          for (std::size_t k = 0; k < 3; ++k) {
            const double s = std::round(static_cast<double>(pos[k]) + disp[k]);
            src[k] = static_cast<std::size_t>(
                std::clamp(s, 0.0, static_cast<double>(dims[k] - 1)));
          }
          labels[(z * dims[1] + r) * dims[2] + c] =
              y[(src[0] * dims[1] + src[1]) * dims[2] + src[2]];
        }
      }
    }
  }

  std::vector<float> image(n);
  Rng noise(split_seed(spec.seed, 1));
  for (std::size_t i = 0; i < n; ++i) {
    double v = intensities[labels[i]];
    if (noise_std > 0.0) v += noise_std * noise.normal();
    image[i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return Image(shape, std::move(image));
}

LabelVolume toy_segment(const Image& img, std::span<const double> class_intensities) {
  const std::size_t classes = class_intensities.size();
  if (classes < 2) bad_spec("toy segmenter needs at least two classes");
  for (std::size_t a = 0; a < classes; ++a) {
    for (std::size_t b = a + 1; b < classes; ++b) {
      if (class_intensities[a] == class_intensities[b]) {
        bad_spec("class intensities must be distinct");
      }
    }
  }
  std::vector<std::uint8_t> labels(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = img[i];
    std::size_t best = 0;
    double best_d = std::abs(v - class_intensities[0]);
    for (std::size_t c = 1; c < classes; ++c) {
      const double d = std::abs(v - class_intensities[c]);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = static_cast<std::uint8_t>(best);
  }
  return LabelVolume(img.shape(), classes, std::move(labels));
}

}  // namespace sfseg
