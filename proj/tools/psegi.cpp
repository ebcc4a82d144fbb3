// psegi: selective p-values for image segmentation results.

#include "psegi/error.hpp"
#include "psegi/experiment.hpp"
#include "psegi/image.hpp"
#include "psegi/inference.hpp"
#include "psegi/noise.hpp"
#include "psegi/preprocess.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace psegi;

struct AlgoOptions {
  std::string algo = "th-local";
  std::size_t half_window = 1;
  std::optional<std::size_t> window;
  double theta = 1.0;
  bool printed_form = false;
  double gc_sigma = 0.1;
  double lambda = 1.0;
  double intensity_range = 1.0;
  std::string piece_mode = "fixed";
  std::string seeds = "auto";
  double intensity_scale = 255.0;
};

void add_algo_options(CLI::App& app, AlgoOptions& o) {
  app.add_option("--algo", o.algo, "gc, th-global or th-local")->check(CLI::IsMember({"gc", "th-global", "th-local"}));
  app.add_option("--half-window", o.half_window, "Local threshold window half-size");
  app.add_option("--window", o.window, "Local threshold window side; half-size is side / 2");
  app.add_option("--theta", o.theta, "Local threshold divisor");
  app.add_flag("--printed-form", o.printed_form, "Record x_p - mean(W_p) without theta");
  app.add_option("--gc-sigma", o.gc_sigma, "Graph-cut similarity width");
  app.add_option("--lambda", o.lambda, "Graph-cut data-term weight");
  app.add_option("--intensity-range", o.intensity_range, "Graph-cut intensity difference scale");
  app.add_option("--piece-mode", o.piece_mode, "Spline piece selection: fixed or sample-variance")
      ->check(CLI::IsMember({"fixed", "sample-variance"}));
  app.add_option("--seeds", o.seeds, "auto, or object and background pixel indices as 'o:1,2;b:7'");
  app.add_option("--intensity-scale", o.intensity_scale, "Global threshold: pixel value multiplier onto 0..255");
}

std::vector<std::uint32_t> parse_indices(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    } catch (const std::exception&) {
      throw InputError("bad pixel index '" + item + "'");
    }
  }
  return out;
}

InferenceParams make_params(const AlgoOptions& o) {
  InferenceParams p;
  p.algo = parse_algo(o.algo);
  p.local.half_window = o.window ? *o.window / 2 : o.half_window;
  p.local.theta = o.theta;
  p.local.printed_form = o.printed_form;
  p.gc.sigma = o.gc_sigma;
  p.gc.lambda = o.lambda;
  p.gc.intensity_range = o.intensity_range;
  p.gc.piece_mode = o.piece_mode == "fixed" ? PieceMode::fixed_sigma : PieceMode::sample_variance;
  if (o.seeds != "auto") {
    p.gc.auto_seeds = false;
    std::stringstream ss(o.seeds);
    std::string part;
    while (std::getline(ss, part, ';')) {
      if (part.rfind("o:", 0) == 0) p.gc.object_seeds = parse_indices(part.substr(2));
      else if (part.rfind("b:", 0) == 0) p.gc.background_seeds = parse_indices(part.substr(2));
      else throw InputError("seeds must look like 'o:1,2;b:7'");
    }
  }
  p.otsu.intensity_scale = o.intensity_scale;
  return p;
}

std::vector<std::size_t> parse_sizes(const std::vector<std::string>& items) {
  std::vector<std::size_t> out;
  for (const auto& s : items) {
    try {
      out.push_back(std::stoul(s));
    } catch (const std::exception&) {
      throw InputError("bad size '" + s + "'");
    }
  }
  return out;
}

struct ExperimentOptions {
  std::string experiment = "fpr";
  std::size_t trials = 2000;
  std::vector<std::string> sizes = {"9", "25", "100"};
  std::vector<double> effects = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::string null_mode = "fpr";
  double signal_sigma = 0.1;
  std::string scale = "desk";
  bool large_gc = false;
  unsigned workers = 0;
  std::string out;
};

void add_experiment_options(CLI::App& app, ExperimentOptions& o) {
  app.add_option("--experiment", o.experiment, "fpr, tpr or single")
      ->check(CLI::IsMember({"fpr", "tpr", "single"}));
  app.add_option("--trials", o.trials, "Monte Carlo trials per setting");
  app.add_option("--sizes", o.sizes, "Pixel counts, perfect squares")->delimiter(',');
  app.add_option("--effects", o.effects, "Block mean shifts for tpr")->delimiter(',');
  app.add_option("--alpha", o.alpha, "Significance level");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--null-mode", o.null_mode, "fpr: N(0.5, 0.5); small: N(0.5, 0.01)")
      ->check(CLI::IsMember({"fpr", "small"}));
  app.add_option("--signal-sigma", o.signal_sigma, "Noise sd of tpr images");
  app.add_option("--scale", o.scale, "desk: 20x20 tpr images; full: 100x100")->check(CLI::IsMember({"desk", "full"}));
  app.add_flag("--large-gc", o.large_gc, "Allow graph-cut runs above 225 pixels");
  app.add_option("--workers", o.workers, "Worker threads (default: PSEGI_WORKERS or hardware)");
  app.add_option("--out", o.out, "Output file (default: standard output)");
}

ExperimentSpec make_spec(const ExperimentOptions& o, const AlgoOptions& a) {
  ExperimentSpec s;
  s.kind = parse_experiment(o.experiment);
  s.params = make_params(a);
  s.sizes = parse_sizes(o.sizes);
  s.effects = o.effects;
  s.trials = o.trials;
  s.alpha = o.alpha;
  s.seed = o.seed;
  s.null_mode = o.null_mode == "fpr" ? NullMode::fpr : NullMode::small_noise;
  s.signal_sigma = o.signal_sigma;
  s.scale = o.scale == "desk" ? SignalScale::desk : SignalScale::full;
  s.allow_large_gc = o.large_gc;
  s.workers = o.workers;
  return s;
}

template <class Write>
void emit(const std::string& path, Write&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path);
  write(f);
}

void report_losses(const std::vector<SettingResult>& results) {
  for (const auto& r : results)
    if (r.degenerate || r.tracking_errors || r.failures)
      std::cerr << r.setting << ": " << r.degenerate << " degenerate, " << r.tracking_errors << " tracking errors, "
                << r.failures << " other failures\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective p-values for graph-cut and threshold segmentation"};
  app.require_subcommand(1);

  AlgoOptions test_algo;
  std::string image_path, mask_path, json_path, noise_image;
  std::optional<double> sigma2;
  int blur = 0;
  double blur_sigma = 0.0;
  bool raw = false;
  auto* test = app.add_subcommand("test", "Segment one image and report both p-values as JSON");
  test->add_option("--image", image_path, "PGM or PNG grayscale image")->required();
  test->add_option("--sigma2", sigma2, "Known noise variance (normalized units)");
  test->add_option("--noise-image", noise_image, "Estimate the noise variance from this object-free image");
  test->add_option("--blur", blur, "Gaussian blur kernel side before segmentation (odd, 0 = none)");
  test->add_option("--blur-sigma", blur_sigma, "Gaussian blur sd (default: (side - 1) / 6)");
  std::string boundary = "replicate";
  test->add_option("--boundary", boundary, "Filter padding: replicate or zero")
      ->check(CLI::IsMember({"replicate", "zero"}));
  test->add_flag("--raw", raw, "Keep 0..255 intensities instead of dividing by 255");
  test->add_option("--mask", mask_path, "Write the object mask as PGM");
  test->add_option("--json", json_path, "Write the report here instead of standard output");
  add_algo_options(*test, test_algo);

  AlgoOptions cal_algo;
  ExperimentOptions cal_exp;
  auto* calibrate = app.add_subcommand("calibrate", "Monte Carlo FPR/TPR estimates as CSV");
  add_experiment_options(*calibrate, cal_exp);
  add_algo_options(*calibrate, cal_algo);

  AlgoOptions plot_algo;
  ExperimentOptions plot_exp;
  auto* plotdata = app.add_subcommand("plotdata", "Monte Carlo estimates as gnuplot data columns");
  add_experiment_options(*plotdata, plot_exp);
  add_algo_options(*plotdata, plot_algo);

  std::string null_path;
  bool null_raw = false;
  auto* est = app.add_subcommand("estimate-noise", "Maximum-likelihood noise variance of an object-free image");
  est->add_option("--image", null_path, "PGM or PNG grayscale image")->required();
  est->add_flag("--raw", null_raw, "Keep 0..255 intensities instead of dividing by 255");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*test) {
      const Image img = load_image(image_path, !raw);
      std::optional<NoiseModel> noise;
      if (sigma2) noise = NoiseModel::isotropic(*sigma2);
      else if (!noise_image.empty()) noise = estimate_noise(load_image(noise_image, !raw));
      else throw InputError("give --sigma2 or --noise-image");
      LinearPreprocess pre;
      if (blur > 1)
        pre = LinearPreprocess({FilterStage::gaussian_blur(blur, blur_sigma)},
                               boundary == "zero" ? Boundary::zero : Boundary::replicate);
      const auto report = run_psegi(img, make_params(test_algo), *noise, pre);
      if (!mask_path.empty()) save_mask(mask_path, img.width(), img.height(), report.segmentation.object);
      emit(json_path, [&](std::ostream& os) { os << nlohmann::json(report).dump(2) << '\n'; });
    } else if (*calibrate) {
      const auto results = run_experiment(make_spec(cal_exp, cal_algo));
      emit(cal_exp.out, [&](std::ostream& os) { write_csv(os, results); });
      report_losses(results);
    } else if (*plotdata) {
      const auto results = run_experiment(make_spec(plot_exp, plot_algo));
      emit(plot_exp.out, [&](std::ostream& os) { write_plot_data(os, results); });
      report_losses(results);
    } else if (*est) {
      const auto noise = estimate_noise(load_image(null_path, !null_raw));
      std::cout << nlohmann::json{{"sigma2", noise.sigma2()}}.dump() << '\n';
    }
  } catch (const TrackingError& e) {
    std::cerr << "tracking error: " << e.what() << '\n';
    return 3;
  } catch (const DegenerateEventError& e) {
    std::cerr << "degenerate event: " << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const SegmentationError& e) {
    std::cerr << "segmentation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
