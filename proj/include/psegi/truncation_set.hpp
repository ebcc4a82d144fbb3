#pragma once

#include "psegi/tau_poly.hpp"

#include "json.hpp"

#include <limits>
#include <span>
#include <vector>

namespace psegi {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kDefaultEps = 1e-12;

struct Interval {
  double lo = 0.0;
  double hi = kInf;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint closed intervals inside [0, inf), kept sorted.
/// Endpoints closer than eps are merged on construction.
class TruncationSet {
public:
  /// (0, inf): the identity element of intersection.
  TruncationSet();
  static TruncationSet empty();
  /// Normalizes (clips to [0, inf), sorts, merges) an arbitrary interval list.
  static TruncationSet from_intervals(std::vector<Interval> intervals, double eps = kDefaultEps);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool is_empty() const { return intervals_.empty(); }
  double measure() const;
  double inf() const;
  double sup() const;
  bool contains(double tau, double tol = 0.0) const;

  friend bool operator==(const TruncationSet&, const TruncationSet&) = default;

private:
  std::vector<Interval> intervals_;
};

/// Solution set of constraint.poly rel 0 over tau > 0.
TruncationSet solve_constraint(const TauConstraint& constraint, double eps = kDefaultEps);

TruncationSet intersect(const TruncationSet& lhs, const TruncationSet& rhs, double eps = kDefaultEps);
TruncationSet intersect(std::span<const TruncationSet> sets, double eps = kDefaultEps);

/// Solves every constraint and folds the intersection in order. Constraints
/// that leave tau_hat outside the result raise TrackingError naming the
/// offending origin.
TruncationSet intersect_constraints(std::span<const TauConstraint> constraints, double tau_hat,
                                    double eps = kDefaultEps);

/// [[lo, hi], ...] with the string "inf" for an unbounded upper end.
void to_json(nlohmann::json& j, const TruncationSet& s);

} // namespace psegi
