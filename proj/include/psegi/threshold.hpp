#pragma once

#include "psegi/image.hpp"
#include "psegi/quadratic_form.hpp"
#include "psegi/segmentation.hpp"
#include "psegi/truncation_set.hpp"

#include <memory>
#include <vector>

namespace psegi {

struct OtsuParams {
  /// Multiplier that maps pixel values onto the 0..255 threshold grid;
  /// 255 for images normalized to [0, 1].
  double intensity_scale = 255.0;
};

/// Selection event of global thresholding: the pixel order, the chosen
/// level, and dominance of its between-class variance over every other
/// split realized by some level.
struct GlobalThresholdEvent {
  int threshold = 0;
  /// Pixels in nondecreasing order of value, ties by index.
  std::shared_ptr<const std::vector<std::uint32_t>> order;
  /// Number of background pixels at the chosen level.
  std::size_t split = 0;
  /// n_above * n_below * (mean_above - mean_below)^2 at the chosen level.
  double between = 0.0;
  std::vector<StructuralConstraint> constraints;
};

/// n_above * n_below * (mean_above - mean_below)^2 when the first `split`
/// entries of order form the lower class.
double otsu_between(std::span<const double> x, const std::vector<std::uint32_t>& order,
                    std::size_t split);

/// x' M x for the lower class order[0, split) and upper class order[split, n).
QuadraticForm otsu_form(std::shared_ptr<const std::vector<std::uint32_t>> order, std::size_t split);

struct OtsuOutput {
  SegmentationResult result;
  GlobalThresholdEvent event;
};

/// Object = pixels with intensity_scale * x >= t*, t* the first level in
/// 0..255 maximizing the between-class variance. Throws SegmentationError
/// when no level splits the image.
OtsuOutput otsu_segment(const Image& img, const OtsuParams& params = {});

struct LocalThresholdParams {
  /// The window of p is the (2 half_window + 1)^2 square around p, clipped
  /// at the image border.
  std::size_t half_window = 1;
  double theta = 1.0;
  /// Record x_p - mean(W_p) instead of theta x_p - mean(W_p). Matches the
  /// classification only when theta == 1.
  bool printed_form = false;
};

BoxWindow local_window(std::size_t pixel, std::size_t width, std::size_t height,
                       std::size_t half_window);

struct LocalThresholdOutput {
  SegmentationResult result;
  /// One constraint per pixel, in pixel order.
  std::vector<StructuralConstraint> constraints;
};

/// Object iff theta x_p >= mean of x over W_p; ties go to the object.
LocalThresholdOutput local_threshold_segment(const Image& img, const LocalThresholdParams& params);

/// Intersection over tau > 0 of every constraint restricted to ctx's line.
TruncationSet build_th_event_on_line(std::span<const StructuralConstraint> constraints,
                                     LineContext& ctx, double tau_hat);

} // namespace psegi
