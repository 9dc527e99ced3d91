#include "sfseg/nig.hpp"

#include <cmath>
#include <numbers>

namespace sfseg {

NigField nig_params(const LabelVolume& y, const LabelVolume& y_entropy,
                    const ScalarField& regional, const PipelineConfig& cfg,
                    const ProbVolume& p) {
  require_same_grid(y.shape(), y_entropy.shape(), "nig_params labels");
  require_same_grid(y.shape(), regional.shape(), "nig_params regional entropy");
  require_same_grid(y.shape(), p.shape(), "nig_params probabilities");
  if (!(cfg.epsilon > 1.0)) {
    fail(ErrorCode::BadConfig, "epsilon must be > 1 so that alpha > 1");
  }

  const std::size_t n = y.voxel_count();
  std::vector<double> alpha(n), beta(n), omega(n), gamma(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = y[i] != y_entropy[i] ? 1.0 : 0.0;
    const double e = regional[i];
    alpha[i] = cfg.kappa * d + cfg.epsilon;
    beta[i] = cfg.zeta1 * (1.0 - e) + cfg.zeta2;
    omega[i] = 1.0 / (cfg.eta1 * e + cfg.eta2);
    gamma[i] = y_entropy[i] != 0 ? p.at(y_entropy[i], i) : 0.0;
  }
  const GridShape& shape = y.shape();
  return NigField{ScalarField(shape, std::move(alpha)),
                  ScalarField(shape, std::move(beta)),
                  ScalarField(shape, std::move(omega)),
                  ScalarField(shape, std::move(gamma))};
}

double nig_logpdf(double mu, double sigma2, const NigParams& params) {
  const auto [alpha, beta, gamma, omega] = params;
  if (!(sigma2 > 0.0 && alpha > 0.0 && beta > 0.0 && omega > 0.0)) {
    fail(ErrorCode::BadParams,
         "nig_logpdf needs sigma2, alpha, beta, omega > 0");
  }
  const double dev = gamma - mu;
  return alpha * std::log(beta) + 0.5 * std::log(omega) - std::lgamma(alpha) -
         0.5 * std::log(2.0 * std::numbers::pi * sigma2) -
         (alpha + 1.0) * std::log(sigma2) -
         (2.0 * beta + omega * dev * dev) / (2.0 * sigma2);
}

ScalarField nig_variance(const NigField& field) {
  const std::size_t n = field.alpha.size();
  std::vector<double> var(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double alpha = field.alpha[i];
    if (!(alpha > 1.0)) {
      fail(ErrorCode::AlphaNotGreaterThanOne,
           "alpha = " + std::to_string(alpha) + " at voxel " +
               std::to_string(i));
    }
    var[i] = field.omega[i] / (field.beta[i] * (alpha - 1.0));
  }
  return ScalarField(field.alpha.shape(), std::move(var));
}

DenoiseResult hierarchical_denoise(const ProbVolume& p,
                                   const PipelineConfig& cfg) {
  cfg.validate();
  LabelVolume pseudo = argmax_labels(p);
  ScalarField h = voxel_entropy(p);
  ScalarField e = regional_entropy(h, p.classes());
  LabelVolume entropy_refined = entropy_mask(pseudo, h, cfg.tau1);
  NigField nig = nig_params(pseudo, entropy_refined, e, cfg, p);
  ScalarField variance = nig_variance(nig);

  std::vector<std::uint8_t> refined(pseudo.values().begin(),
                                    pseudo.values().end());
  for (std::size_t i = 0; i < refined.size(); ++i) {
    bool keep = variance[i] <= cfg.tau2;
    if (cfg.mask_mode == MaskMode::Hierarchical) keep = keep && h[i] <= cfg.tau1;
    if (!keep) refined[i] = 0;
  }
  LabelVolume refined_labels(p.shape(), p.classes(), std::move(refined));
  return DenoiseResult{std::move(pseudo),
                       std::move(entropy_refined),
                       std::move(refined_labels),
                       EntropyMaps{std::move(h), std::move(e)},
                       std::move(nig),
                       std::move(variance)};
}

}  // namespace sfseg
