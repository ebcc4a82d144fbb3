#include "psegi/inference.hpp"

#include "psegi/error.hpp"
#include "psegi/graphcut.hpp"

#include <chrono>
#include <cmath>

namespace psegi {

std::vector<double> Contrast::eta() const {
  std::vector<double> e(object.size());
  const double po = sign / static_cast<double>(n_object);
  const double pb = -sign / static_cast<double>(n_background);
  for (std::size_t i = 0; i < object.size(); ++i) e[i] = object[i] ? po : pb;
  return e;
}

Contrast make_contrast(std::span<const std::uint8_t> object, std::span<const double> segmented) {
  if (object.size() != segmented.size()) throw InputError("mask does not match the image");
  Contrast c;
  c.object.assign(object.begin(), object.end());
  double so = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < object.size(); ++i) {
    if (object[i]) {
      ++c.n_object;
      so += segmented[i];
    } else {
      ++c.n_background;
      sb += segmented[i];
    }
  }
  if (c.n_object == 0 || c.n_background == 0)
    throw SegmentationError("segmentation produced a single region; there is no contrast to test");
  const double diff = so / static_cast<double>(c.n_object) - sb / static_cast<double>(c.n_background);
  c.sign = diff < 0.0 ? -1.0 : 1.0;
  return c;
}

Decomposition decompose(const Image& x, const Contrast& contrast, const NoiseModel& noise,
                        const LinearPreprocess& preprocess) {
  if (contrast.object.size() != x.size()) throw InputError("contrast does not match the image");
  if (contrast.n_object == 0 || contrast.n_background == 0) throw SegmentationError("degenerate contrast");
  std::vector<double> v = contrast.eta();
  if (!preprocess.is_identity()) v = preprocess.apply_adjoint(v, x.width(), x.height());

  Decomposition d;
  d.eta_sigma_eta = noise.quadratic(v);
  if (!(d.eta_sigma_eta > 0.0)) throw DegenerateEventError("contrast has zero variance under the noise model");
  double dh = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dh += v[i] * x[i];
  d.delta_hat = dh;
  d.y = noise.apply(v);
  for (double& yi : d.y) yi /= d.eta_sigma_eta;
  d.z.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d.z[i] = x[i] - dh * d.y[i];
  return d;
}

nlohmann::json params_json(const InferenceParams& p) {
  nlohmann::json j;
  switch (p.algo) {
  case Algo::gc:
    j["sigma"] = p.gc.sigma;
    j["lambda"] = p.gc.lambda;
    j["intensity_range"] = p.gc.intensity_range;
    j["piece_mode"] = p.gc.piece_mode == PieceMode::fixed_sigma ? "fixed-sigma" : "sample-variance";
    j["seeds"] = p.gc.auto_seeds ? "auto" : "explicit";
    break;
  case Algo::th_local:
    j["half_window"] = p.local.half_window;
    j["theta"] = p.local.theta;
    j["printed_form"] = p.local.printed_form;
    break;
  case Algo::th_global:
    j["intensity_scale"] = p.otsu.intensity_scale;
    break;
  }
  return j;
}

void to_json(nlohmann::json& j, const InferenceReport& r) {
  j = nlohmann::json::object();
  j["algo"] = to_string(r.algo);
  j["params"] = r.params;
  j["delta_hat"] = r.delta_hat;
  j["eta_sigma_eta"] = r.eta_sigma_eta;
  j["selective_p"] = r.selective_p;
  j["naive_p"] = r.naive_p;
  j["intervals"] = r.intervals;
  j["n_constraints"] = r.n_constraints;
  nlohmann::json by_origin = nlohmann::json::object();
  for (int o = 0; o < kOriginCount; ++o)
    if (r.constraints_by_origin[o]) by_origin[std::string(to_string(static_cast<Origin>(o)))] = r.constraints_by_origin[o];
  j["constraints_by_origin"] = by_origin;
  j["seed_pixels"] = {{"object", r.segmentation.object_seeds}, {"background", r.segmentation.background_seeds}};
  j["object_size"] = r.segmentation.object_count();
  j["image"] = {{"width", r.segmentation.width}, {"height", r.segmentation.height}};
  j["elapsed_ms"] = r.elapsed_ms;
}

std::vector<TauConstraint> collect_event(const Image& segmented, const InferenceParams& params,
                                         const NoiseModel& noise, std::span<const double> z_seg,
                                         std::span<const double> y_seg, double tau_hat,
                                         SegmentationResult* result) {
  LineContext ctx(z_seg, y_seg, segmented.width(), segmented.height());
  switch (params.algo) {
  case Algo::th_local: {
    auto seg = local_threshold_segment(segmented, params.local);
    if (result) *result = std::move(seg.result);
    return restrict_constraints(seg.constraints, ctx);
  }
  case Algo::th_global: {
    auto seg = otsu_segment(segmented, params.otsu);
    if (result) *result = std::move(seg.result);
    return restrict_constraints(seg.event.constraints, ctx);
  }
  case Algo::gc: {
    const SegGraph g = build_graph(segmented, params.gc, noise.sigma2());
    auto t = trace_segment(g, z_seg, y_seg, tau_hat);
    if (result) *result = std::move(t.result);
    return std::move(t.trace.constraints);
  }
  }
  throw InputError("unknown algorithm");
}

namespace {

SegmentationResult segment(const Image& segmented, const InferenceParams& params, const NoiseModel& noise) {
  switch (params.algo) {
  case Algo::th_local: return local_threshold_segment(segmented, params.local).result;
  case Algo::th_global: return otsu_segment(segmented, params.otsu).result;
  case Algo::gc: return maxflow_segment(build_graph(segmented, params.gc, noise.sigma2())).result;
  }
  throw InputError("unknown algorithm");
}

} // namespace

InferenceReport run_psegi(const Image& img, const InferenceParams& params, const NoiseModel& noise,
                          const LinearPreprocess& preprocess) {
  const auto start = std::chrono::steady_clock::now();
  if (noise.kind() == NoiseModel::Kind::full && static_cast<std::size_t>(noise.covariance().rows()) != img.size())
    throw InputError("noise covariance does not match the image size");

  const bool filtered = !preprocess.is_identity();
  const Image segmented = filtered ? preprocess.apply(img) : img;

  InferenceReport r;
  r.algo = params.algo;
  r.params = params_json(params);
  r.params["preprocess"] = preprocess.describe();

  const SegmentationResult seg = segment(segmented, params, noise);
  const Contrast contrast = make_contrast(seg.object, segmented.pixels());
  const Decomposition d = decompose(img, contrast, noise, preprocess);

  std::vector<double> z_seg = d.z, y_seg = d.y;
  if (filtered) {
    z_seg = preprocess.apply(d.z, img.width(), img.height());
    y_seg = preprocess.apply(d.y, img.width(), img.height());
  }
  SegmentationResult traced;
  const auto constraints = collect_event(segmented, params, noise, z_seg, y_seg, d.delta_hat, &traced);
  if (traced.object != seg.object) throw TrackingError("event construction changed the segmentation");

  r.segmentation = seg;
  r.delta_hat = d.delta_hat;
  r.eta_sigma_eta = d.eta_sigma_eta;
  r.n_constraints = constraints.size();
  for (const auto& c : constraints) ++r.constraints_by_origin[static_cast<std::size_t>(c.origin)];
  r.intervals = intersect_constraints(constraints, d.delta_hat);
  r.selective_p = selective_pvalue(d.delta_hat, d.eta_sigma_eta, r.intervals);
  r.naive_p = naive_pvalue(d.delta_hat, d.eta_sigma_eta);
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

} // namespace psegi
