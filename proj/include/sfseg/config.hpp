#pragma once

#include <cstddef>
#include <cstdint>

namespace sfseg {

enum class MaskMode {
  Hierarchical,  // keep voxels passing both the entropy and variance tests
  NigOnly,       // variance test alone, applied to the raw argmax labels
};

enum class FusionMode { Hard, Soft };

struct CannyParams {
  double sigma = 1.0;
  double high = 0.1;  // on max-normalized gradient magnitude
  double low = 0.04;

  int kernel_radius() const;
  void validate() const;  // throws BadParams
};

struct PipelineConfig {
  double tau1 = 0.2;  // entropy threshold (bits)
  double tau2 = 0.2;  // variance threshold

  // Evidential prior constants.
  double kappa = 1.0;
  double epsilon = 2.0;
  double zeta1 = 5.0;
  double zeta2 = 0.1;
  double eta1 = 1.0;
  double eta2 = 10.0;

  std::size_t n_candidates = 6;
  CannyParams canny;
  int align_radius = 0;
  MaskMode mask_mode = MaskMode::Hierarchical;
  FusionMode fusion_mode = FusionMode::Hard;
  std::uint64_t seed = 0;

  void validate() const;  // throws BadConfig
};

}  // namespace sfseg
