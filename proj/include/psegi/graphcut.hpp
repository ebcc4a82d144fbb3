#pragma once

#include "psegi/graph.hpp"
#include "psegi/segmentation.hpp"
#include "psegi/tau_poly.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace psegi {

struct MaxflowOutput {
  SegmentationResult result;
  /// Total flow, including the flow routed directly from S to T through
  /// each pixel's two terminal links.
  double flow = 0.0;
};

/// Minimum s-t cut of g; object = source side.
MaxflowOutput maxflow_segment(const SegGraph& g);

/// Ordered record of one symbolic run: the constraints, and the outcome of
/// every decision point (recorded or not) for forced replay.
struct AlgorithmTrace {
  std::vector<TauConstraint> constraints;
  std::vector<std::uint8_t> decisions;

  std::array<std::size_t, kOriginCount> counts() const;
};

struct TraceOutput {
  SegmentationResult result;
  /// Seed choice, spline pieces and neighbour-sum dominance, then every
  /// capacity comparison of the max-flow run.
  AlgorithmTrace trace;
};

/// Re-runs max-flow on g with capacities restricted to the line z + tau y
/// and records every comparison. z + tau_hat y must be the image g was
/// built from; a mismatch between polynomial and numeric capacities raises
/// TrackingError.
TraceOutput trace_segment(const SegGraph& g, std::span<const double> z, std::span<const double> y,
                          double tau_hat);

/// Runs max-flow on g with every decision taken from `decisions` instead of
/// the capacities. Throws TrackingError when the decisions run out or are
/// left over.
SegmentationResult replay(const SegGraph& g, std::span<const std::uint8_t> decisions);

} // namespace psegi
