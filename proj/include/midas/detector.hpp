#pragma once

#include <cstdint>

namespace midas {

/// Standard normal quantile. Rational approximation plus one Newton step;
/// absolute error below 1e-8 over (0, 1).
double normal_quantile(double p);

/// Quantile of a chi-squared variable with one degree of freedom.
double chi2_quantile_1df(double p);

/// Edge count statistic corrected for sketch overestimation.
struct AdjustedStatistic {
  double adjusted_current = 0.0;  // a-hat - nu * N_t
  double expected = 0.0;          // s-hat / t, the mean-level expectation
  double value = 0.0;             // chi2_score(adjusted_current, s-hat, t)
};

AdjustedStatistic adjusted_statistic(double current, double total, std::uint64_t t,
                                     std::uint64_t tick_edges, double nu);

/// False-positive level epsilon and sketch error nu. Immutable once built.
class DetectorConfig {
 public:
  DetectorConfig(double epsilon, double nu);

  double epsilon() const noexcept { return epsilon_; }
  double nu() const noexcept { return nu_; }
  /// chi2_quantile_1df(1 - epsilon / 2)
  double threshold() const noexcept { return threshold_; }

 private:
  double epsilon_;
  double nu_;
  double threshold_;
};

/// Flags the edge when the adjusted statistic strictly exceeds the threshold.
/// Deficits (adjusted count below the expected level) are never flagged.
bool decide(const AdjustedStatistic& stat, const DetectorConfig& config) noexcept;

}  // namespace midas
