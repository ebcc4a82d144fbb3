#include "psegi/threshold.hpp"

#include "psegi/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace psegi {

double otsu_between(std::span<const double> x, const std::vector<std::uint32_t>& order,
                    std::size_t split) {
  const std::size_t n = order.size();
  if (split == 0 || split >= n) return 0.0;
  double below = 0.0, above = 0.0;
  for (std::size_t k = 0; k < split; ++k) below += x[order[k]];
  for (std::size_t k = split; k < n; ++k) above += x[order[k]];
  const double nb = static_cast<double>(split), na = static_cast<double>(n - split);
  const double diff = above / na - below / nb;
  return na * nb * diff * diff;
}

QuadraticForm otsu_form(std::shared_ptr<const std::vector<std::uint32_t>> order, std::size_t split) {
  const std::size_t n = order->size();
  if (split == 0 || split >= n) throw InputError("otsu form needs a nondegenerate split");
  const double nb = static_cast<double>(split), na = static_cast<double>(n - split);
  const auto lower = LinearForm::order_range(order, 0, split);
  const auto upper = LinearForm::order_range(order, split, n);
  QuadraticForm q;
  q.products.push_back({nb / na, upper, upper});
  q.products.push_back({na / nb, lower, lower});
  q.products.push_back({-2.0, upper, lower});
  return q;
}

OtsuOutput otsu_segment(const Image& img, const OtsuParams& params) {
  if (!(params.intensity_scale > 0.0)) throw InputError("intensity scale must be positive");
  const std::size_t n = img.size();
  const auto x = img.pixels();
  const double s = params.intensity_scale;

  auto order_vec = std::make_shared<std::vector<std::uint32_t>>(n);
  std::iota(order_vec->begin(), order_vec->end(), 0u);
  std::stable_sort(order_vec->begin(), order_vec->end(),
                   [&](std::uint32_t a, std::uint32_t b) { return x[a] < x[b]; });
  std::shared_ptr<const std::vector<std::uint32_t>> order = order_vec;

  // Prefix sums along the order give every split's class sums in O(1).
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + x[(*order)[k]];
  auto between = [&](std::size_t k) {
    const double nb = static_cast<double>(k), na = static_cast<double>(n - k);
    const double diff = (prefix[n] - prefix[k]) / na - prefix[k] / nb;
    return na * nb * diff * diff;
  };

  // Split realized by each level: number of pixels with s * x < t.
  std::vector<std::size_t> split_of(256);
  std::size_t k = 0;
  for (int t = 0; t < 256; ++t) {
    while (k < n && s * x[(*order)[k]] < t) ++k;
    split_of[t] = k;
  }

  int best_t = -1;
  double best = -1.0;
  for (int t = 0; t < 256; ++t) {
    const std::size_t sp = split_of[t];
    if (sp == 0 || sp == n) continue;
    const double v = between(sp);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  if (best_t < 0) throw SegmentationError("no threshold level splits the image into two regions");

  OtsuOutput out;
  auto& ev = out.event;
  ev.threshold = best_t;
  ev.order = order;
  ev.split = split_of[best_t];
  ev.between = best;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    QuadraticForm q;
    q.linear = LinearForm::difference((*order)[i], (*order)[i + 1]);
    ev.constraints.push_back({std::move(q), Relation::le, Origin::th_order});
  }

  // The chosen level is the first one realizing the chosen split.
  const std::uint32_t first_above = (*order)[ev.split];
  const std::uint32_t last_below = (*order)[ev.split - 1];
  {
    QuadraticForm q;
    q.linear = LinearForm::unit(first_above, s);
    q.constant = -best_t;
    ev.constraints.push_back({std::move(q), Relation::ge, Origin::th_otsu_level});
  }
  {
    QuadraticForm q;
    q.linear = LinearForm::unit(last_below, s);
    q.constant = -best_t;
    ev.constraints.push_back({std::move(q), Relation::lt, Origin::th_otsu_level});
  }
  if (best_t >= 1) {
    QuadraticForm q;
    q.linear = LinearForm::unit(last_below, s);
    q.constant = -(best_t - 1);
    ev.constraints.push_back({std::move(q), Relation::ge, Origin::th_otsu_level});
  }

  const QuadraticForm chosen = otsu_form(order, ev.split);
  std::size_t previous = n + 1;
  for (int t = 0; t < 256; ++t) {
    const std::size_t sp = split_of[t];
    if (sp == 0 || sp == n || sp == ev.split || sp == previous) continue;
    previous = sp;
    ev.constraints.push_back({chosen - otsu_form(order, sp), Relation::ge, Origin::th_otsu});
  }

  auto& res = out.result;
  res.width = img.width();
  res.height = img.height();
  res.object.assign(n, 0);
  for (std::size_t i = ev.split; i < n; ++i) res.object[(*order)[i]] = 1;
  return out;
}

BoxWindow local_window(std::size_t pixel, std::size_t width, std::size_t height,
                       std::size_t half_window) {
  const std::size_t r = pixel / width, c = pixel % width;
  BoxWindow b;
  b.row0 = r >= half_window ? r - half_window : 0;
  b.row1 = std::min(height, r + half_window + 1);
  b.col0 = c >= half_window ? c - half_window : 0;
  b.col1 = std::min(width, c + half_window + 1);
  return b;
}

LocalThresholdOutput local_threshold_segment(const Image& img, const LocalThresholdParams& params) {
  if (!(params.theta > 0.0) || !std::isfinite(params.theta))
    throw InputError("theta must be a positive finite number");
  const std::size_t w = img.width(), h = img.height(), n = img.size();

  // The classification uses the same reduction as the recorded constraints,
  // so the observed image satisfies them to rounding.
  std::vector<double> zeros(n, 0.0);
  LineContext ctx(img.pixels(), zeros, w, h);

  LocalThresholdOutput out;
  out.result.width = w;
  out.result.height = h;
  out.result.object.assign(n, 0);
  out.constraints.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    const BoxWindow box = local_window(p, w, h, params.half_window);
    QuadraticForm q;
    q.linear = LinearForm::unit(p, params.theta);
    q.linear.add(LinearForm::box(box, -1.0 / static_cast<double>(box.area())));
    const bool object = ctx.restrict(q).c >= 0.0;
    out.result.object[p] = object ? 1 : 0;
    if (params.printed_form) {
      q.linear = LinearForm::unit(p);
      q.linear.add(LinearForm::box(box, -1.0 / static_cast<double>(box.area())));
    }
    out.constraints.push_back({std::move(q), object ? Relation::ge : Relation::lt, Origin::th_local});
  }
  return out;
}

TruncationSet build_th_event_on_line(std::span<const StructuralConstraint> constraints,
                                     LineContext& ctx, double tau_hat) {
  const auto reduced = restrict_constraints(constraints, ctx);
  return intersect_constraints(reduced, tau_hat);
}

} // namespace psegi
