#pragma once

#include "sfseg/config.hpp"
#include "sfseg/core_types.hpp"
#include "sfseg/uncertainty.hpp"

namespace sfseg {

// Per-voxel evidential (Normal-Inverse-Gamma) prior parameters.
struct NigField {
  ScalarField alpha;
  ScalarField beta;
  ScalarField omega;
  ScalarField gamma;  // location: probability of the retained class, 0 if masked
};

struct NigParams {
  double alpha;
  double beta;
  double gamma;
  double omega;
};

// alpha = kappa * d + epsilon, with d the 0/1 disagreement between the raw
// and entropy-masked labels; beta = zeta1 (1 - E) + zeta2;
// omega = 1 / (eta1 E + eta2).
NigField nig_params(const LabelVolume& y, const LabelVolume& y_entropy,
                    const ScalarField& regional, const PipelineConfig& cfg,
                    const ProbVolume& p);

// Log of the joint density p(mu, sigma2 | alpha, beta, gamma, omega).
double nig_logpdf(double mu, double sigma2, const NigParams& params);

// omega / (beta (alpha - 1)); throws AlphaNotGreaterThanOne.
ScalarField nig_variance(const NigField& field);

struct DenoiseResult {
  LabelVolume pseudo;           // argmax of the input
  LabelVolume entropy_refined;  // after the entropy threshold
  LabelVolume refined;          // final denoised labels
  EntropyMaps entropy;
  NigField nig;
  ScalarField variance;
};

DenoiseResult hierarchical_denoise(const ProbVolume& p,
                                   const PipelineConfig& cfg);

}  // namespace sfseg
