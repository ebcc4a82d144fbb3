#include "psegi/trunc_normal.hpp"

#include "psegi/error.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

namespace psegi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTailSwitch = 6.0;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double log_diff_exp(double la, double lb) {
  // log(exp(la) - exp(lb)) for la >= lb.
  if (lb == kNegInf) return la;
  if (lb >= la) return kNegInf;
  return la + std::log(-std::expm1(lb - la));
}

double log_sum_exp(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(), std::greater<>());
  if (terms.empty() || terms.front() == kNegInf) return kNegInf;
  const double top = terms.front();
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return top + std::log(acc);
}

double clamp_probability(double p) {
  if (p < -1e-10 || p > 1.0 + 1e-10)
    std::cerr << "warning: probability " << p << " clamped to [0, 1]\n";
  return std::clamp(p, 0.0, 1.0);
}

} // namespace

double mills_ratio(double x) {
  if (x < 0.0) throw InputError("mills_ratio needs x >= 0");
  if (x < kTailSwitch) {
    const double q = 0.5 * std::erfc(x / std::numbers::sqrt2);
    return q / std::exp(-0.5 * x * x - kLogSqrt2Pi);
  }
  // R(x) = 1 / (x + 1 / (x + 2 / (x + 3 / (x + ...)))), modified Lentz.
  constexpr double tiny = 1e-300;
  double f = x, c = x, d = 0.0;
  for (int k = 1; k < 500; ++k) {
    d = x + k * d;
    if (d == 0.0) d = tiny;
    c = x + k / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

double log_upper_tail(double x) {
  if (x == kInf) return kNegInf;
  if (x < kTailSwitch) return std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
  return -0.5 * x * x - kLogSqrt2Pi + std::log(mills_ratio(x));
}

double log_normal_mass(double lo, double hi) {
  if (!(hi > lo)) return kNegInf;
  if (lo >= 0.0) return log_diff_exp(log_upper_tail(lo), log_upper_tail(hi));
  if (hi <= 0.0) return log_diff_exp(log_upper_tail(-hi), log_upper_tail(-lo));
  const double outside = std::exp(log_upper_tail(-lo)) + std::exp(log_upper_tail(hi));
  return std::log1p(-outside);
}

TruncatedNormal::TruncatedNormal(double mean, double s2, TruncationSet support)
    : mean_(mean), s2_(s2), sd_(std::sqrt(s2)), support_(std::move(support)) {
  if (!(s2 > 0.0) || !std::isfinite(s2)) throw InputError("truncated normal needs a positive variance");
  if (!std::isfinite(mean)) throw InputError("truncated normal needs a finite mean");
  log_mass_ = log_partial(-kInf, kInf);
  if (log_mass_ == kNegInf || std::isnan(log_mass_)) {
    std::ostringstream os;
    os << "numerically degenerate event: support of " << support_.intervals().size()
       << " interval(s) has no probability mass";
    throw DegenerateEventError(os.str());
  }
}

double TruncatedNormal::log_partial(double lo, double hi) const {
  std::vector<double> parts;
  for (const auto& iv : support_.intervals()) {
    const double a = std::max(iv.lo, lo);
    const double b = std::min(iv.hi, hi);
    if (b <= a) continue;
    parts.push_back(log_normal_mass((a - mean_) / sd_, (b - mean_) / sd_));
  }
  return log_sum_exp(std::move(parts));
}

double TruncatedNormal::cdf(double x) const {
  if (std::isnan(x)) throw InputError("cdf at NaN");
  if (x <= support_.inf()) return 0.0;
  if (x >= support_.sup()) return 1.0;
  return clamp_probability(std::exp(log_partial(-kInf, x) - log_mass_));
}

double TruncatedNormal::upper_tail(double x) const {
  if (std::isnan(x)) throw InputError("upper tail at NaN");
  if (x <= support_.inf()) return 1.0;
  if (x >= support_.sup()) return 0.0;
  return clamp_probability(std::exp(log_partial(x, kInf) - log_mass_));
}

double selective_pvalue(double delta_hat, double eta_sigma_eta, const TruncationSet& E) {
  const double tol = 1e-8 * std::max(1.0, std::abs(delta_hat));
  if (!E.contains(delta_hat, tol)) {
    std::ostringstream os;
    os << "observed statistic " << delta_hat << " lies outside its truncation set";
    throw TrackingError(os.str());
  }
  TruncatedNormal tn(0.0, eta_sigma_eta, E);
  return tn.upper_tail(delta_hat);
}

double naive_pvalue(double delta_hat, double eta_sigma_eta) {
  if (!(eta_sigma_eta > 0.0)) throw InputError("naive p-value needs a positive variance");
  const double z = std::abs(delta_hat) / std::sqrt(eta_sigma_eta);
  return std::min(1.0, 2.0 * std::exp(log_upper_tail(z)));
}

} // namespace psegi
