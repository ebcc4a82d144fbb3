#include "psegi/graph.hpp"

#include "psegi/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace psegi {

namespace {

struct SplineCoefficients {
  double g1, h1, g2, h2;
};

SplineCoefficients spline(double sigma, double dist) {
  const double s2 = sigma * sigma;
  const double tail = std::exp(-1.0 / (2.0 * s2));
  const double knot = std::exp(-0.5);
  return {(knot - 1.0) / (s2 * dist), 1.0 / dist,
          (knot - tail) / ((sigma - 1.0) * (sigma - 1.0) * dist), tail / dist};
}

void validate(const GraphCutParams& p, double noise_sigma2) {
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma) || p.sigma == 1.0)
    throw InputError("similarity sigma must be positive, finite and differ from 1");
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) throw InputError("lambda must be positive");
  if (!(p.intensity_range > 0.0) || !std::isfinite(p.intensity_range))
    throw InputError("intensity range must be positive");
  if (!(noise_sigma2 > 0.0) || !std::isfinite(noise_sigma2))
    throw InputError("noise variance must be positive");
}

double terminal(double lambda, double sigma2, double x, double mean) {
  const double d = x - mean;
  return lambda * (std::log(2.0 * std::numbers::pi * sigma2) + d * d / (2.0 * sigma2));
}

} // namespace

int neighbor_piece(double d, double piece_variance) {
  if (d * d <= piece_variance) return 1;
  return d > 0.0 ? 2 : 3;
}

double neighbor_weight(double d, double dist, double sigma, int piece) {
  const auto k = spline(sigma, dist);
  switch (piece) {
  case 1: return k.g1 * d * d + k.h1;
  case 2: return k.g2 * (d - 1.0) * (d - 1.0) + k.h2;
  case 3: return k.g2 * (d + 1.0) * (d + 1.0) + k.h2;
  }
  throw InputError("unknown spline piece");
}

SegGraph build_graph(const Image& img, const GraphCutParams& params, double noise_sigma2) {
  validate(params, noise_sigma2);
  const std::size_t w = img.width(), h = img.height(), n = img.size();
  const auto x = img.pixels();

  SegGraph g;
  g.width = w;
  g.height = h;
  g.params = params;
  g.noise_sigma2 = noise_sigma2;

  if (params.auto_seeds) {
    const auto hi = std::max_element(x.begin(), x.end());
    const auto lo = std::min_element(x.begin(), x.end());
    if (*hi == *lo) throw SegmentationError("constant image: brightest and darkest seed coincide");
    g.object_seeds = {static_cast<std::uint32_t>(hi - x.begin())};
    g.background_seeds = {static_cast<std::uint32_t>(lo - x.begin())};
  } else {
    g.object_seeds = params.object_seeds;
    g.background_seeds = params.background_seeds;
    if (g.object_seeds.empty() || g.background_seeds.empty()) throw InputError("empty seed set");
    std::set<std::uint32_t> ob(g.object_seeds.begin(), g.object_seeds.end());
    for (auto s : g.object_seeds)
      if (s >= n) throw InputError("object seed outside the image");
    for (auto s : g.background_seeds) {
      if (s >= n) throw InputError("background seed outside the image");
      if (ob.count(s)) throw InputError("seed pixel in both seed sets");
    }
  }
  g.params.object_seeds = g.object_seeds;
  g.params.background_seeds = g.background_seeds;

  const double range = params.intensity_range;
  if (params.piece_mode == PieceMode::sample_variance) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    g.piece_variance = ss / static_cast<double>(n - 1) / (range * range);
  } else {
    g.piece_variance = params.sigma * params.sigma;
  }

  g.neighbor_sum.assign(n, 0.0);
  auto add_edge = [&](std::size_t p, std::size_t q, double dist) {
    NeighborEdge e;
    e.p = static_cast<std::uint32_t>(p);
    e.q = static_cast<std::uint32_t>(q);
    e.dist = dist;
    const double d = (x[p] - x[q]) / range;
    e.piece = neighbor_piece(d, g.piece_variance);
    e.weight = neighbor_weight(d, dist, params.sigma, e.piece);
    g.neighbor_sum[p] += e.weight;
    g.neighbor_sum[q] += e.weight;
    g.edges.push_back(e);
  };
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const std::size_t p = r * w + c;
      if (c + 1 < w) add_edge(p, p + 1, 1.0);
      if (r + 1 < h) {
        if (c > 0) add_edge(p, p + w - 1, std::numbers::sqrt2);
        add_edge(p, p + w, 1.0);
        if (c + 1 < w) add_edge(p, p + w + 1, std::numbers::sqrt2);
      }
    }
  }
  g.kmax_pixel = static_cast<std::uint32_t>(
      std::max_element(g.neighbor_sum.begin(), g.neighbor_sum.end()) - g.neighbor_sum.begin());

  auto mean_of = [&](const std::vector<std::uint32_t>& s) {
    double acc = 0.0;
    for (auto i : s) acc += x[i];
    return acc / static_cast<double>(s.size());
  };
  g.object_mean = mean_of(g.object_seeds);
  g.background_mean = mean_of(g.background_seeds);

  g.source_weight.resize(n);
  g.sink_weight.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    g.source_weight[p] = terminal(params.lambda, noise_sigma2, x[p], g.background_mean);
    g.sink_weight[p] = terminal(params.lambda, noise_sigma2, x[p], g.object_mean);
  }
  const double seed = g.seed_weight();
  for (auto s : g.object_seeds) {
    g.source_weight[s] = seed;
    g.sink_weight[s] = 0.0;
  }
  for (auto s : g.background_seeds) {
    g.source_weight[s] = 0.0;
    g.sink_weight[s] = seed;
  }
  return g;
}

WeightPolys restrict_graph(const SegGraph& g, LineContext& ctx) {
  const std::size_t n = g.size();
  if (ctx.size() != n) throw InputError("line does not match the graph");
  const auto& params = g.params;
  const double range = params.intensity_range;
  WeightPolys out;

  if (params.auto_seeds) {
    const auto o = g.object_seeds.front();
    const auto b = g.background_seeds.front();
    for (std::size_t p = 0; p < n; ++p)
      if (p != o) out.seed_constraints.push_back({ctx.pixel(o) - ctx.pixel(p), Relation::ge, Origin::seed_max});
    for (std::size_t p = 0; p < n; ++p)
      if (p != b) out.seed_constraints.push_back({ctx.pixel(b) - ctx.pixel(p), Relation::le, Origin::seed_min});
  }

  TauPoly piece_variance = TauPoly::constant(g.piece_variance);
  if (params.piece_mode == PieceMode::sample_variance) {
    TauPoly sum, sum_sq;
    for (std::size_t p = 0; p < n; ++p) {
      sum += ctx.pixel(p);
      sum_sq += TauPoly::product(ctx.pixel(p), ctx.pixel(p));
    }
    const double nn = static_cast<double>(n);
    piece_variance = (1.0 / ((nn - 1.0) * range * range)) * (sum_sq - (1.0 / nn) * TauPoly::product(sum, sum));
  }

  std::vector<TauPoly> k(n);
  out.edge.reserve(g.edges.size());
  for (const auto& e : g.edges) {
    const TauPoly d = (1.0 / range) * (ctx.pixel(e.p) - ctx.pixel(e.q));
    const TauPoly d2 = TauPoly::product(d, d);
    const auto sp = spline(params.sigma, e.dist);
    TauPoly wpoly;
    if (e.piece == 1) {
      out.weight_constraints.push_back({d2 - piece_variance, Relation::le, Origin::gc_piece});
      wpoly = sp.g1 * d2 + TauPoly::constant(sp.h1);
    } else {
      out.weight_constraints.push_back({d2 - piece_variance, Relation::gt, Origin::gc_piece});
      const bool upper = e.piece == 2;
      out.weight_constraints.push_back({d, upper ? Relation::gt : Relation::lt, Origin::gc_piece_sign});
      const TauPoly shifted = d + TauPoly::constant(upper ? -1.0 : 1.0);
      wpoly = sp.g2 * TauPoly::product(shifted, shifted) + TauPoly::constant(sp.h2);
    }
    k[e.p] += wpoly;
    k[e.q] += wpoly;
    out.edge.push_back(wpoly);
  }

  const auto star = g.kmax_pixel;
  for (std::size_t p = 0; p < n; ++p) {
    if (p == star || nearly_equal(k[star], k[p])) continue;
    out.weight_constraints.push_back({k[star] - k[p], Relation::ge, Origin::gc_kmax});
  }

  auto mean_of = [&](const std::vector<std::uint32_t>& s) {
    TauPoly acc;
    for (auto i : s) acc += ctx.pixel(i);
    return (1.0 / static_cast<double>(s.size())) * acc;
  };
  const TauPoly m_ob = mean_of(g.object_seeds);
  const TauPoly m_bg = mean_of(g.background_seeds);
  const double lambda = params.lambda, s2 = g.noise_sigma2;
  const double log_term = std::log(2.0 * std::numbers::pi * s2);
  auto terminal_poly = [&](std::size_t p, const TauPoly& m) {
    const TauPoly d = ctx.pixel(p) - m;
    return lambda * (TauPoly::constant(log_term) + (1.0 / (2.0 * s2)) * TauPoly::product(d, d));
  };
  out.source.resize(n);
  out.sink.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    out.source[p] = terminal_poly(p, m_bg);
    out.sink[p] = terminal_poly(p, m_ob);
  }
  const TauPoly seed = TauPoly::constant(1.0) + k[star];
  for (auto s : g.object_seeds) {
    out.source[s] = seed;
    out.sink[s] = TauPoly{};
  }
  for (auto s : g.background_seeds) {
    out.source[s] = TauPoly{};
    out.sink[s] = seed;
  }
  return out;
}

double cut_cost(const SegGraph& g, std::span<const std::uint8_t> object) {
  if (object.size() != g.size()) throw InputError("mask does not match the graph");
  double cost = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) cost += object[p] ? g.sink_weight[p] : g.source_weight[p];
  for (const auto& e : g.edges)
    if (object[e.p] != object[e.q]) cost += e.weight;
  return cost;
}

} // namespace psegi
