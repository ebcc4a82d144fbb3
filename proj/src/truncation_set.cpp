#include "psegi/truncation_set.hpp"

#include "psegi/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace psegi {

std::string_view to_string(Relation r) {
  switch (r) {
  case Relation::le: return "<=";
  case Relation::lt: return "<";
  case Relation::ge: return ">=";
  case Relation::gt: return ">";
  }
  return "?";
}

std::string_view to_string(Origin o) {
  switch (o) {
  case Origin::seed_max: return "seed:max";
  case Origin::seed_min: return "seed:min";
  case Origin::gc_piece: return "gc:weight-piece";
  case Origin::gc_piece_sign: return "gc:weight-piece-sign";
  case Origin::gc_kmax: return "gc:kmax";
  case Origin::gc_init: return "gc:init";
  case Origin::gc_grow: return "gc:grow";
  case Origin::gc_augment_cmp: return "gc:augment-cmp";
  case Origin::gc_adopt: return "gc:adopt";
  case Origin::th_local: return "th:local";
  case Origin::th_otsu: return "th:otsu";
  case Origin::th_order: return "th:order";
  case Origin::th_otsu_level: return "th:otsu-level";
  case Origin::test: return "test";
  }
  return "?";
}

bool nearly_equal(const TauPoly& l, const TauPoly& r, double rel) {
  auto close = [rel](double u, double v) { return std::abs(u - v) <= rel * (std::abs(u) + std::abs(v)); };
  return close(l.a, r.a) && close(l.b, r.b) && close(l.c, r.c);
}

TruncationSet::TruncationSet() : intervals_{Interval{0.0, kInf}} {}

TruncationSet TruncationSet::empty() {
  TruncationSet s;
  s.intervals_.clear();
  return s;
}

TruncationSet TruncationSet::from_intervals(std::vector<Interval> intervals, double eps) {
  std::vector<Interval> kept;
  kept.reserve(intervals.size());
  for (auto iv : intervals) {
    iv.lo = std::max(iv.lo, 0.0);
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || iv.hi < iv.lo) continue;
    kept.push_back(iv);
  }
  std::sort(kept.begin(), kept.end(), [](const Interval& l, const Interval& r) { return l.lo < r.lo; });

  TruncationSet s = empty();
  for (const auto& iv : kept) {
    if (!s.intervals_.empty() && iv.lo <= s.intervals_.back().hi + eps) {
      s.intervals_.back().hi = std::max(s.intervals_.back().hi, iv.hi);
    } else {
      s.intervals_.push_back(iv);
    }
  }
  return s;
}

double TruncationSet::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals_) m += iv.hi - iv.lo;
  return m;
}

double TruncationSet::inf() const { return intervals_.empty() ? kInf : intervals_.front().lo; }

double TruncationSet::sup() const { return intervals_.empty() ? -kInf : intervals_.back().hi; }

bool TruncationSet::contains(double tau, double tol) const {
  for (const auto& iv : intervals_)
    if (tau >= iv.lo - tol && tau <= iv.hi + tol) return true;
  return false;
}

namespace {

// Solution of a tau^2 + b tau + c <= 0 over the real line.
std::vector<Interval> solve_upper(double a, double b, double c, double eps) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (scale == 0.0) return {{-kInf, kInf}};
  if (std::abs(a) <= eps * scale) a = 0.0;
  if (a == 0.0 && std::abs(b) <= eps * scale) b = 0.0;

  if (a == 0.0 && b == 0.0) {
    if (c <= eps) return {{-kInf, kInf}};
    return {};
  }
  if (a == 0.0) {
    const double r = -c / b;
    if (b > 0.0) return {{-kInf, r}};
    return {{r, kInf}};
  }

  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0 && -disc <= eps * b * b) disc = 0.0;
  if (disc < 0.0) {
    if (a > 0.0) return {};
    return {{-kInf, kInf}};
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  double r1 = 0.0, r2 = 0.0;
  if (q != 0.0) {
    r1 = q / a;
    r2 = c / q;
  }
  if (r1 > r2) std::swap(r1, r2);
  if (a > 0.0) return {{r1, r2}};
  return {{-kInf, r1}, {r2, kInf}};
}

} // namespace

TruncationSet solve_constraint(const TauConstraint& constraint, double eps) {
  TauPoly p = constraint.poly;
  if (!std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c))
    throw TrackingError("non-finite constraint coefficients from " + std::string(to_string(constraint.origin)));
  if (!is_upper(constraint.relation)) p = -p;
  return TruncationSet::from_intervals(solve_upper(p.a, p.b, p.c, eps), eps);
}

TruncationSet intersect(const TruncationSet& lhs, const TruncationSet& rhs, double eps) {
  const auto& l = lhs.intervals();
  const auto& r = rhs.intervals();
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < l.size() && j < r.size()) {
    const double lo = std::max(l[i].lo, r[j].lo);
    const double hi = std::min(l[i].hi, r[j].hi);
    if (hi >= lo) out.push_back({lo, hi});
    if (l[i].hi < r[j].hi)
      ++i;
    else
      ++j;
  }
  return TruncationSet::from_intervals(std::move(out), eps);
}

TruncationSet intersect(std::span<const TruncationSet> sets, double eps) {
  TruncationSet acc;
  for (const auto& s : sets) acc = intersect(acc, s, eps);
  return acc;
}

TruncationSet intersect_constraints(std::span<const TauConstraint> constraints, double tau_hat,
                                    double eps) {
  const double tol = 1e-8 * std::max(1.0, std::abs(tau_hat));
  TruncationSet acc;
  for (std::size_t k = 0; k < constraints.size(); ++k) {
    auto s = solve_constraint(constraints[k], eps);
    if (!s.contains(tau_hat)) {
      if (!s.contains(tau_hat, tol)) {
        std::ostringstream os;
        os << "constraint #" << k << " (" << to_string(constraints[k].origin)
           << ") excludes the observed statistic " << tau_hat;
        throw TrackingError(os.str());
      }
      // Rounding put tau_hat just outside a boundary; widen that boundary.
      auto ivs = s.intervals();
      for (auto& iv : ivs) {
        if (tau_hat >= iv.lo - tol && tau_hat < iv.lo) iv.lo = tau_hat;
        if (tau_hat <= iv.hi + tol && tau_hat > iv.hi) iv.hi = tau_hat;
      }
      s = TruncationSet::from_intervals(std::move(ivs), eps);
    }
    acc = intersect(acc, s, eps);
    if (acc.is_empty()) throw TrackingError("empty truncation set after " + std::string(to_string(constraints[k].origin)));
  }
  return acc;
}

void to_json(nlohmann::json& j, const TruncationSet& s) {
  j = nlohmann::json::array();
  for (const auto& iv : s.intervals()) {
    nlohmann::json hi = std::isinf(iv.hi) ? nlohmann::json("inf") : nlohmann::json(iv.hi);
    j.push_back(nlohmann::json::array({iv.lo, hi}));
  }
}

} // namespace psegi
