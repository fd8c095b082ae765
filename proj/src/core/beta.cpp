#include "beta.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace sharpvar {

namespace {

constexpr int kMaxFractionTerms = 1000;
constexpr int kMaxRootIterations = 200;
constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Continued fraction for I_x(a, b) * a B(a, b) / (x^a (1-x)^b), modified Lentz.
double beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  fail(ErrorCode::NumericalFailure, "incomplete beta continued fraction did not converge");
}

// Lower-tail problem: t = ln x with I_x(a, b) = target and x <= x_max, where
// I_{x_max}(a, b) >= target. Returns x.
double solve_lower_tail(double a, double b, double target, double x_max) {
  const double lb = log_beta(a, b);
  const double log_target = std::log(target);
  double t_hi = std::log(x_max);
  double t_lo = -std::numeric_limits<double>::infinity();
  // I_x ~ x^a / (a B(a, b)) as x -> 0.
  double t = std::min((log_target + std::log(a) + lb) / a, t_hi);

  for (int iter = 0; iter < kMaxRootIterations; ++iter) {
    const double x = std::exp(t);
    const double cdf = regularized_incomplete_beta(x, a, b);
    if (cdf <= 0.0) {
      t_lo = t;
      t = std::isfinite(t_hi) ? 0.5 * (t + t_hi) : t + 1.0;
      continue;
    }
    const double h = std::log(cdf) - log_target;
    if (h == 0.0) return x;
    if (h > 0.0) t_hi = t; else t_lo = t;
    const double log_pdf = (a - 1.0) * t + (b - 1.0) * std::log1p(-x) - lb;
    // d/dt ln I(e^t) = x pdf(x) / I(x)
    const double slope = std::exp(t + log_pdf) / cdf;
    double next = t - h / slope;
    if (!(next > t_lo && next < t_hi)) {
      next = std::isfinite(t_lo) ? 0.5 * (t_lo + t_hi) : t - 2.0;
    }
    if (std::fabs(next - t) <= 4.0 * kEps * std::fmax(1.0, std::fabs(t))) return std::exp(next);
    if (std::isfinite(t_lo) && t_hi - t_lo <= 4.0 * kEps * std::fmax(1.0, std::fabs(t_hi))) {
      return std::exp(next);
    }
    t = next;
  }
  fail(ErrorCode::NumericalFailure, "beta quantile iteration did not converge for u = " + std::to_string(target));
}

}  // namespace

void BetaMarginal::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha) || !(beta > 0.0) || !std::isfinite(beta)) {
    fail(ErrorCode::InvalidInput, "Beta shapes must be finite and positive (alpha = " +
                                      std::to_string(alpha) + ", beta = " + std::to_string(beta) + ")");
  }
}

double regularized_incomplete_beta(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_fraction(a, b, x) / a;
  return 1.0 - std::exp(log_front) * beta_fraction(b, a, 1.0 - x) / b;
}

double beta_inverse_cdf(const BetaMarginal& marginal, double u) {
  marginal.validate();
  if (!(u > 0.0 && u < 1.0)) fail(ErrorCode::InvalidInput, "Beta quantile requires u in (0, 1)");
  const double a = marginal.alpha;
  const double b = marginal.beta;
  const double x_mid = marginal.mean();
  const double cdf_mid = regularized_incomplete_beta(x_mid, a, b);
  if (u <= cdf_mid) return solve_lower_tail(a, b, u, x_mid);
  // I_x(a, b) = u  <=>  I_{1-x}(b, a) = 1 - u
  return 1.0 - solve_lower_tail(b, a, 1.0 - u, 1.0 - x_mid);
}

}  // namespace sharpvar
