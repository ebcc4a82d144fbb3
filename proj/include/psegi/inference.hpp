#pragma once

#include "psegi/graph.hpp"
#include "psegi/image.hpp"
#include "psegi/noise.hpp"
#include "psegi/preprocess.hpp"
#include "psegi/segmentation.hpp"
#include "psegi/tau_poly.hpp"
#include "psegi/threshold.hpp"
#include "psegi/trunc_normal.hpp"
#include "psegi/truncation_set.hpp"

#include "json.hpp"

#include <array>
#include <span>
#include <vector>

namespace psegi {

/// Object-versus-background contrast of a partition. The test direction
/// eta = sign * (e_O / |O| - e_B / |B|) lives on the segmented image.
struct Contrast {
  std::vector<std::uint8_t> object;
  std::size_t n_object = 0;
  std::size_t n_background = 0;
  /// Sign of mean(object) - mean(background) on the segmented image; +1 on ties.
  double sign = 1.0;

  std::vector<double> eta() const;
};

/// Throws SegmentationError when either region is empty.
Contrast make_contrast(std::span<const std::uint8_t> object, std::span<const double> segmented);

/// x = z + delta_hat * y with y = Sigma v / (v' Sigma v), v = L' eta.
struct Decomposition {
  std::vector<double> y;
  std::vector<double> z;
  double delta_hat = 0.0;
  double eta_sigma_eta = 0.0;
};

Decomposition decompose(const Image& x, const Contrast& contrast, const NoiseModel& noise,
                        const LinearPreprocess& preprocess = {});

struct InferenceParams {
  Algo algo = Algo::th_local;
  GraphCutParams gc;
  LocalThresholdParams local;
  OtsuParams otsu;
};

nlohmann::json params_json(const InferenceParams& p);

struct InferenceReport {
  Algo algo = Algo::th_local;
  nlohmann::json params;
  SegmentationResult segmentation;
  double delta_hat = 0.0;
  double eta_sigma_eta = 0.0;
  double selective_p = 1.0;
  double naive_p = 1.0;
  TruncationSet intervals;
  std::size_t n_constraints = 0;
  std::array<std::size_t, kOriginCount> constraints_by_origin{};
  double elapsed_ms = 0.0;
};

void to_json(nlohmann::json& j, const InferenceReport& r);

/// Segments L x, tests the mean difference between the two regions, and
/// returns both the selective and the naive p-value. Errors are typed:
/// SegmentationError, TrackingError, DegenerateEventError.
InferenceReport run_psegi(const Image& img, const InferenceParams& params, const NoiseModel& noise,
                          const LinearPreprocess& preprocess = {});

/// The constraints of the segmentation of `segmented` (= L x) restricted to
/// the line L z + tau L y, in collection order. Exposed for diagnostics and
/// oracles.
std::vector<TauConstraint> collect_event(const Image& segmented, const InferenceParams& params,
                                         const NoiseModel& noise, std::span<const double> z_seg,
                                         std::span<const double> y_seg, double tau_hat,
                                         SegmentationResult* result = nullptr);

} // namespace psegi
