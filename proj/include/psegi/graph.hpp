#pragma once

#include "psegi/image.hpp"
#include "psegi/quadratic_form.hpp"
#include "psegi/tau_poly.hpp"

#include <cstdint>
#include <vector>

namespace psegi {

/// How a neighbour weight's spline piece is selected: against the fixed
/// similarity sigma, or against the sample variance of the image (divisor
/// n - 1). The weight formulas use the fixed sigma in both modes.
enum class PieceMode { fixed_sigma, sample_variance };

struct GraphCutParams {
  /// Width of the intensity-similarity function, in units of intensity_range.
  double sigma = 0.1;
  /// Multiplier of the terminal (data) weights.
  double lambda = 1.0;
  /// Intensity differences are divided by this before entering the
  /// similarity function.
  double intensity_range = 1.0;
  PieceMode piece_mode = PieceMode::fixed_sigma;
  /// Auto seeds: the first brightest pixel is the object seed and the first
  /// darkest the background seed. Otherwise the explicit sets are used.
  bool auto_seeds = true;
  std::vector<std::uint32_t> object_seeds;
  std::vector<std::uint32_t> background_seeds;
};

/// Undirected 8-neighbourhood edge; the weight applies to both directions.
struct NeighborEdge {
  std::uint32_t p = 0;
  std::uint32_t q = 0;
  double dist = 1.0;
  /// 1: |d| <= sigma, 2: d > sigma, 3: d < -sigma, with d = (x_p - x_q) / range.
  int piece = 1;
  double weight = 0.0;
};

struct SegGraph {
  std::size_t width = 0;
  std::size_t height = 0;
  GraphCutParams params;
  double noise_sigma2 = 0.0;
  std::vector<NeighborEdge> edges;
  /// w(S, p) and w(p, T).
  std::vector<double> source_weight;
  std::vector<double> sink_weight;
  std::vector<std::uint32_t> object_seeds;
  std::vector<std::uint32_t> background_seeds;
  double object_mean = 0.0;
  double background_mean = 0.0;
  /// Sum of neighbour weights per pixel, and the first pixel attaining the max.
  std::vector<double> neighbor_sum;
  std::uint32_t kmax_pixel = 0;
  /// Sample variance used for piece selection in sample_variance mode.
  double piece_variance = 0.0;

  std::size_t size() const { return source_weight.size(); }
  double seed_weight() const { return 1.0 + neighbor_sum[kmax_pixel]; }
};

/// Neighbour weight for a scaled difference d at the given distance, and the
/// piece it falls in given the piece-selection variance.
double neighbor_weight(double d, double dist, double sigma, int piece);
int neighbor_piece(double d, double piece_variance);

/// Builds the seeded graph on img. noise_sigma2 is the per-pixel variance
/// entering the terminal weights.
SegGraph build_graph(const Image& img, const GraphCutParams& params, double noise_sigma2);

/// Every graph weight restricted to a line, plus the constraints that make
/// those restrictions valid: seed choice, spline pieces and the maximal
/// neighbour sum.
struct WeightPolys {
  std::vector<TauPoly> edge;
  std::vector<TauPoly> source;
  std::vector<TauPoly> sink;
  std::vector<TauConstraint> seed_constraints;
  /// Spline pieces, then dominance of the maximal neighbour sum.
  std::vector<TauConstraint> weight_constraints;
};

WeightPolys restrict_graph(const SegGraph& g, LineContext& ctx);

/// Cost of the cut placing object pixels on the source side.
double cut_cost(const SegGraph& g, std::span<const std::uint8_t> object);

} // namespace psegi
