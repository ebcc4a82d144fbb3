#include "psegi/experiment.hpp"

#include "psegi/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

namespace psegi {

ExperimentKind parse_experiment(const std::string& name) {
  if (name == "fpr") return ExperimentKind::fpr;
  if (name == "tpr") return ExperimentKind::tpr;
  if (name == "single") return ExperimentKind::single;
  throw InputError("unknown experiment '" + name + "' (expected fpr, tpr or single)");
}

WilsonInterval wilson_interval(std::size_t hits, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

unsigned default_workers() {
  if (const char* env = std::getenv("PSEGI_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void validate(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw InputError("trials must be at least 1");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (spec.kind == ExperimentKind::tpr) {
    if (spec.effects.empty()) throw InputError("tpr experiment needs at least one effect size");
    if (spec.params.algo == Algo::gc && !spec.allow_large_gc && spec.scale == SignalScale::full)
      throw InputError("graph-cut runs above 225 pixels need the large-gc flag");
  } else {
    if (spec.sizes.empty()) throw InputError("experiment needs at least one image size");
    for (auto n : spec.sizes) {
      const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
      if (n < 4 || side * side != n) throw InputError("image sizes must be perfect squares >= 4");
      if (spec.params.algo == Algo::gc && n > 225 && !spec.allow_large_gc)
        throw InputError("graph-cut runs above 225 pixels need the large-gc flag");
    }
  }
}

std::string format_setting(const char* key, double v) {
  std::ostringstream os;
  os << key << '=' << v;
  return os.str();
}

} // namespace

TrialOutcome run_trial(const ExperimentSpec& spec, std::size_t setting, std::size_t trial) {
  const std::uint64_t seed = trial_seed(spec.seed, (static_cast<std::uint64_t>(setting) << 32) | trial);
  TrialOutcome out;
  try {
    std::optional<Image> img;
    double sigma2 = 0.0;
    if (spec.kind == ExperimentKind::tpr) {
      const double mu = spec.effects[setting];
      img.emplace(gen_signal_image(spec.background_mean + mu, spec.background_mean, spec.signal_sigma, seed,
                                   spec.scale));
      sigma2 = spec.signal_sigma * spec.signal_sigma;
    } else {
      img.emplace(gen_null_image(spec.sizes[setting], seed, spec.null_mode));
      sigma2 = null_variance(spec.null_mode);
    }
    const auto r = run_psegi(*img, spec.params, NoiseModel::isotropic(sigma2));
    out.selective_p = r.selective_p;
    out.naive_p = r.naive_p;
  } catch (const SegmentationError&) {
    out.status = TrialOutcome::Status::degenerate;
  } catch (const DegenerateEventError&) {
    out.status = TrialOutcome::Status::degenerate;
  } catch (const TrackingError&) {
    out.status = TrialOutcome::Status::tracking_error;
  } catch (const Error&) {
    out.status = TrialOutcome::Status::failed;
  }
  return out;
}

std::vector<SettingResult> run_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const bool tpr = spec.kind == ExperimentKind::tpr;
  const std::size_t settings = tpr ? spec.effects.size() : spec.sizes.size();
  const std::size_t trials = spec.kind == ExperimentKind::single ? 1 : spec.trials;

  std::vector<SettingResult> results(settings);
  for (std::size_t s = 0; s < settings; ++s) {
    auto& r = results[s];
    r.abscissa = tpr ? spec.effects[s] : static_cast<double>(spec.sizes[s]);
    r.setting = tpr ? format_setting("mu", spec.effects[s]) : format_setting("n", r.abscissa);
    r.outcomes.resize(trials);
  }

  const std::size_t total = settings * trials;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < total; k = next++)
      results[k / trials].outcomes[k % trials] = run_trial(spec, k / trials, k % trials);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(spec.workers ? spec.workers : default_workers(),
                                                           static_cast<unsigned>(total)));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (auto& r : results) {
    for (const auto& o : r.outcomes) {
      ++r.selective.trials;
      ++r.naive.trials;
      switch (o.status) {
      case TrialOutcome::Status::ok:
        r.selective.hits += o.selective_p < spec.alpha;
        r.naive.hits += o.naive_p < spec.alpha;
        break;
      case TrialOutcome::Status::degenerate: ++r.degenerate; break;
      case TrialOutcome::Status::tracking_error: ++r.tracking_errors; break;
      case TrialOutcome::Status::failed: ++r.failures; break;
      }
    }
  }
  return results;
}

void write_csv(std::ostream& os, const std::vector<SettingResult>& results) {
  os << "setting,estimator,value,trials,ci_lo,ci_hi,degenerate_count\n";
  os << std::setprecision(10);
  for (const auto& r : results) {
    const std::size_t lost = r.degenerate + r.tracking_errors + r.failures;
    for (const auto& [name, prop] : {std::pair{"selective", r.selective}, std::pair{"naive", r.naive}}) {
      const auto ci = wilson_interval(prop.hits, prop.trials);
      os << r.setting << ',' << name << ',' << prop.value() << ',' << prop.trials << ',' << ci.lo << ','
         << ci.hi << ',' << lost << '\n';
    }
  }
}

void write_plot_data(std::ostream& os, const std::vector<SettingResult>& results) {
  os << "# x selective sel_lo sel_hi naive naive_lo naive_hi\n";
  os << std::setprecision(10);
  for (const auto& r : results) {
    const auto s = wilson_interval(r.selective.hits, r.selective.trials);
    const auto n = wilson_interval(r.naive.hits, r.naive.trials);
    os << r.abscissa << ' ' << r.selective.value() << ' ' << s.lo << ' ' << s.hi << ' ' << r.naive.value() << ' '
       << n.lo << ' ' << n.hi << '\n';
  }
}

} // namespace psegi
