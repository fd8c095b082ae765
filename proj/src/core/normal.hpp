#pragma once

namespace sharpvar {

/// Standard normal quantile, Wichura's AS241 (PPND16). Absolute error is
/// near machine precision over (0, 1); p outside (0, 1) is InvalidInput.
double inverse_normal_cdf(double p);

}  // namespace sharpvar
