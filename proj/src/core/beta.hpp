#pragma once

namespace sharpvar {

struct BetaMarginal {
  double alpha;
  double beta;

  /// Throws InvalidInput unless both shapes are finite and positive.
  void validate() const;
  double mean() const noexcept { return alpha / (alpha + beta); }
  double variance() const noexcept {
    const double s = alpha + beta;
    return alpha * beta / (s * s * (s + 1.0));
  }
};

/// I_x(a, b), by Lentz's continued fraction on the faster-converging side.
double regularized_incomplete_beta(double x, double a, double b);

/// x with I_x(alpha, beta) = u for u in (0, 1). Safeguarded Newton iteration
/// in log-space on the tail holding the smaller of x and 1 - x.
double beta_inverse_cdf(const BetaMarginal& marginal, double u);

}  // namespace sharpvar
