#include "midas/detector.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "midas/errors.hpp"
#include "midas/scorer.hpp"

namespace midas {
namespace {

// Acklam's coefficients for the inverse normal CDF.
constexpr std::array<double, 6> kA = {-3.969683028665376e+01, 2.209460984245205e+02,
                                      -2.759285104469687e+02, 1.383577518672690e+02,
                                      -3.066479806614716e+01, 2.506628277459239e+00};
constexpr std::array<double, 5> kB = {-5.447609879822406e+01, 1.615858368580409e+02,
                                      -1.556989798598866e+02, 6.680131188771972e+01,
                                      -1.328068155288572e+01};
constexpr std::array<double, 6> kC = {-7.784894002430293e-03, -3.223964580411365e-01,
                                      -2.400758277161838e+00, -2.549732539343734e+00,
                                      4.374664141464968e+00,  2.938163982698783e+00};
constexpr std::array<double, 4> kD = {7.784695709041462e-03, 3.224671290700398e-01,
                                      2.445134137142996e+00, 3.754408661907416e+00};
constexpr double kLow = 0.02425;

double rational_quantile(double p) {
  if (p < kLow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  if (p > 1.0 - kLow) return -rational_quantile(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("probability must lie in (0, 1)");
  // Upper half by symmetry; 1 - p is exact there, Phi(x) near 1 is not.
  if (p > 0.5) return -normal_quantile(1.0 - p);
  double x = rational_quantile(p);
  // Newton step on Phi(x) - p.
  const double cdf = 0.5 * std::erfc(-x / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  if (pdf > 0.0) x -= (cdf - p) / pdf;
  return x;
}

double chi2_quantile_1df(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("probability must lie in (0, 1)");
  const double z = normal_quantile(0.5 * (1.0 + p));
  return z * z;
}

AdjustedStatistic adjusted_statistic(double current, double total, std::uint64_t t,
                                     std::uint64_t tick_edges, double nu) {
  if (t < 1) throw ParameterError("tick must be at least 1");
  AdjustedStatistic s;
  s.adjusted_current = current - nu * static_cast<double>(tick_edges);
  s.expected = total / static_cast<double>(t);
  s.value = chi2_score(s.adjusted_current, total, t);
  return s;
}

DetectorConfig::DetectorConfig(double epsilon, double nu) : epsilon_(epsilon), nu_(nu) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
  if (!(nu > 0.0 && nu < 1.0)) throw ParameterError("nu must lie in (0, 1)");
  // Half of epsilon goes to the chi-squared tail, half to sketch failure.
  threshold_ = chi2_quantile_1df(1.0 - epsilon / 2.0);
}

bool decide(const AdjustedStatistic& stat, const DetectorConfig& config) noexcept {
  if (stat.adjusted_current < stat.expected) return false;
  return stat.value > config.threshold();
}

}  // namespace midas
