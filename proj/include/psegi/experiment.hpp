#pragma once

#include "psegi/inference.hpp"
#include "psegi/synthetic.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace psegi {

enum class ExperimentKind { fpr, tpr, single };

ExperimentKind parse_experiment(const std::string& name);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::fpr;
  InferenceParams params;
  /// Pixel counts (fpr, single); each a perfect square.
  std::vector<std::size_t> sizes = {9, 25, 100};
  /// Block mean shifts mu_s - mu_t (tpr).
  std::vector<double> effects = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::size_t trials = 2000;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  NullMode null_mode = NullMode::fpr;
  double signal_sigma = 0.1;
  double background_mean = 0.5;
  SignalScale scale = SignalScale::desk;
  /// Graph-cut runs refuse sizes above 225 pixels unless set.
  bool allow_large_gc = false;
  /// 0 reads PSEGI_WORKERS, falling back to the hardware concurrency.
  unsigned workers = 0;
};

struct TrialOutcome {
  enum class Status : std::uint8_t { ok, degenerate, tracking_error, failed };
  Status status = Status::ok;
  double selective_p = 1.0;
  double naive_p = 1.0;
};

struct Proportion {
  std::size_t hits = 0;
  std::size_t trials = 0;
  double value() const { return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0; }
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for hits / trials at normal quantile z.
WilsonInterval wilson_interval(std::size_t hits, std::size_t trials, double z = 1.959963984540054);

struct SettingResult {
  /// "n=25" or "mu=0.4".
  std::string setting;
  double abscissa = 0.0;
  Proportion selective;
  Proportion naive;
  std::size_t degenerate = 0;
  std::size_t tracking_errors = 0;
  std::size_t failures = 0;
  /// Indexed by trial.
  std::vector<TrialOutcome> outcomes;
};

/// Runs every setting of spec. Trials that fail count as non-rejections and
/// are tallied by kind; output depends only on spec, not on scheduling.
std::vector<SettingResult> run_experiment(const ExperimentSpec& spec);

/// One trial of one setting; exposed so single trials can be reproduced.
TrialOutcome run_trial(const ExperimentSpec& spec, std::size_t setting, std::size_t trial);

/// Worker count used when spec.workers == 0.
unsigned default_workers();

/// Long format: setting,estimator,value,trials,ci_lo,ci_hi,degenerate_count.
/// degenerate_count covers every trial that produced no p-value.
void write_csv(std::ostream& os, const std::vector<SettingResult>& results);

/// Whitespace-separated columns for gnuplot: abscissa, selective, its
/// interval, naive, its interval.
void write_plot_data(std::ostream& os, const std::vector<SettingResult>& results);

} // namespace psegi
