#pragma once

#include "psegi/truncation_set.hpp"

namespace psegi {

/// log P(Z > x) for standard normal Z, accurate far into both tails.
double log_upper_tail(double x);

/// Q(x) / phi(x) for x >= 0, by continued fraction.
double mills_ratio(double x);

/// log P(lo <= Z <= hi) for standard normal Z; -inf for an empty range.
double log_normal_mass(double lo, double hi);

/// N(mean, s2) conditioned on a union of intervals.
class TruncatedNormal {
public:
  /// Throws DegenerateEventError when the support carries no representable
  /// probability, even in log space.
  TruncatedNormal(double mean, double s2, TruncationSet support);

  double mean() const { return mean_; }
  double variance() const { return s2_; }
  const TruncationSet& support() const { return support_; }
  double log_mass() const { return log_mass_; }

  /// P(X <= x).
  double cdf(double x) const;
  /// P(X >= x), computed directly rather than as 1 - cdf so small tails keep
  /// their relative precision.
  double upper_tail(double x) const;

private:
  double log_partial(double lo, double hi) const;

  double mean_;
  double s2_;
  double sd_;
  TruncationSet support_;
  double log_mass_;
};

/// 1 - F(delta_hat) for the zero-mean truncated normal with variance
/// eta_sigma_eta on E. delta_hat must lie in E up to a relative tolerance.
double selective_pvalue(double delta_hat, double eta_sigma_eta, const TruncationSet& E);

/// 2 (1 - Phi(delta_hat / sqrt(eta_sigma_eta))).
double naive_pvalue(double delta_hat, double eta_sigma_eta);

} // namespace psegi
