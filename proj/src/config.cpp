#include "sfseg/config.hpp"

#include <cmath>
#include <string>

#include "sfseg/error.hpp"

namespace sfseg {

int CannyParams::kernel_radius() const {
  return static_cast<int>(std::ceil(3.0 * sigma));
}

void CannyParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    fail(ErrorCode::BadParams, "canny sigma must be positive");
  }
  if (!(low > 0.0 && low < high && high <= 1.0)) {
    fail(ErrorCode::BadParams, "canny thresholds need 0 < low < high <= 1");
  }
}

namespace {

void require(bool ok, const char* message) {
  if (!ok) fail(ErrorCode::BadConfig, message);
}

}  // namespace

void PipelineConfig::validate() const {
  // tau1 may be negative: that rejects every voxel at the entropy stage.
  require(std::isfinite(tau1), "tau1 must be finite");
  require(tau2 > 0.0 && std::isfinite(tau2), "tau2 must be > 0");
  require(kappa > 0.0, "kappa must be > 0");
  require(epsilon > 1.0, "epsilon must be > 1 so that alpha > 1");
  require(zeta1 > 0.0 && zeta2 > 0.0, "zeta1 and zeta2 must be > 0");
  require(eta1 > 0.0 && eta2 > 0.0, "eta1 and eta2 must be > 0");
  require(n_candidates >= 1, "n_candidates must be >= 1");
  require(align_radius >= 0, "align_radius must be >= 0");
  try {
    canny.validate();
  } catch (const Error& e) {
    fail(ErrorCode::BadConfig, e.what());
  }
}

}  // namespace sfseg
