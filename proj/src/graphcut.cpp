#include "psegi/graphcut.hpp"

#include "psegi/error.hpp"
#include "psegi/maxflow.hpp"
#include "psegi/quadratic_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace psegi {

namespace {

struct PlainOracle {
  bool positive(double c, Origin) { return c > 0.0; }
  bool negative(double c, Origin) { return c < 0.0; }
  bool less(double a, double b, Origin) { return a < b; }
  bool zero(double c) { return c == 0.0; }
};

// Decisions follow the numeric values; the polynomials are recorded. A
// value of exactly zero comes from a capacity that was itself the
// bottleneck, so its polynomial vanishes identically and is not recorded.
struct TraceOracle {
  AlgorithmTrace& trace;

  bool decide(bool d) {
    trace.decisions.push_back(d ? 1 : 0);
    return d;
  }
  void record(const TauPoly& p, Relation r, Origin o) { trace.constraints.push_back({p, r, o}); }

  bool positive(const bk::Traced& c, Origin o) {
    if (c.v > 0.0) record(c.p, Relation::gt, o);
    else if (c.v < 0.0) record(c.p, Relation::le, o);
    return decide(c.v > 0.0);
  }
  bool negative(const bk::Traced& c, Origin o) {
    if (c.v < 0.0) record(c.p, Relation::lt, o);
    else if (c.v > 0.0) record(c.p, Relation::ge, o);
    return decide(c.v < 0.0);
  }
  bool less(const bk::Traced& a, const bk::Traced& b, Origin o) {
    const bool lt = a.v < b.v;
    if (a.v != b.v && !nearly_equal(a.p, b.p)) record(a.p - b.p, lt ? Relation::lt : Relation::ge, o);
    return decide(lt);
  }
  bool zero(const bk::Traced& c) { return decide(c.v == 0.0); }
};

struct ForcedOracle {
  std::span<const std::uint8_t> decisions;
  std::size_t next = 0;

  bool take() {
    if (next >= decisions.size()) throw TrackingError("forced replay ran out of recorded decisions");
    return decisions[next++] != 0;
  }
  bool positive(double, Origin) { return take(); }
  bool negative(double, Origin) { return take(); }
  bool less(double, double, Origin) { return take(); }
  bool zero(double) { return take(); }
};

template <class Cap>
bk::Network<Cap> make_network(const SegGraph& g, const std::vector<Cap>& edge,
                              const std::vector<Cap>& source, const std::vector<Cap>& sink) {
  bk::Network<Cap> net(g.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) net.add_edge(g.edges[e].p, g.edges[e].q, edge[e], edge[e]);
  for (std::size_t p = 0; p < g.size(); ++p) {
    net.tr_cap[p] = source[p];
    net.tr_cap[p] -= sink[p];
  }
  return net;
}

bk::Network<double> numeric_network(const SegGraph& g) {
  std::vector<double> edge(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) edge[e] = g.edges[e].weight;
  return make_network<double>(g, edge, g.source_weight, g.sink_weight);
}

double terminal_flow(const SegGraph& g) {
  double f = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) f += std::min(g.source_weight[p], g.sink_weight[p]);
  return f;
}

template <class Cap, class Oracle>
SegmentationResult partition(const SegGraph& g, bk::Solver<Cap, Oracle>& solver) {
  SegmentationResult r;
  r.width = g.width;
  r.height = g.height;
  r.object.resize(g.size());
  for (std::uint32_t p = 0; p < g.size(); ++p) r.object[p] = solver.in_source_tree(p) ? 1 : 0;
  r.object_seeds = g.object_seeds;
  r.background_seeds = g.background_seeds;
  return r;
}

void check_weight(const TauPoly& poly, double tau_hat, double numeric, const char* what, std::size_t i) {
  const double v = poly.eval(tau_hat);
  if (std::abs(v - numeric) > 1e-8 * std::max(1.0, std::abs(numeric))) {
    std::ostringstream os;
    os << what << " " << i << " restricted to the line gives " << v << " at the observed statistic, graph has "
       << numeric;
    throw TrackingError(os.str());
  }
}

} // namespace

std::array<std::size_t, kOriginCount> AlgorithmTrace::counts() const {
  std::array<std::size_t, kOriginCount> c{};
  for (const auto& k : constraints) ++c[static_cast<std::size_t>(k.origin)];
  return c;
}

MaxflowOutput maxflow_segment(const SegGraph& g) {
  PlainOracle oracle;
  bk::Solver<double, PlainOracle> solver(numeric_network(g), oracle);
  MaxflowOutput out;
  out.flow = terminal_flow(g) + solver.run();
  out.result = partition(g, solver);
  return out;
}

TraceOutput trace_segment(const SegGraph& g, std::span<const double> z, std::span<const double> y,
                          double tau_hat) {
  LineContext ctx(z, y, g.width, g.height);
  WeightPolys polys = restrict_graph(g, ctx);

  std::vector<bk::Traced> edge(g.edges.size()), source(g.size()), sink(g.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    check_weight(polys.edge[e], tau_hat, g.edges[e].weight, "edge", e);
    edge[e] = {g.edges[e].weight, polys.edge[e]};
  }
  for (std::size_t p = 0; p < g.size(); ++p) {
    check_weight(polys.source[p], tau_hat, g.source_weight[p], "source link of pixel", p);
    check_weight(polys.sink[p], tau_hat, g.sink_weight[p], "sink link of pixel", p);
    source[p] = {g.source_weight[p], polys.source[p]};
    sink[p] = {g.sink_weight[p], polys.sink[p]};
  }

  TraceOutput out;
  auto& cons = out.trace.constraints;
  cons = std::move(polys.seed_constraints);
  cons.insert(cons.end(), polys.weight_constraints.begin(), polys.weight_constraints.end());

  TraceOracle oracle{out.trace};
  bk::Solver<bk::Traced, TraceOracle> solver(make_network<bk::Traced>(g, edge, source, sink), oracle);
  solver.run();
  out.result = partition(g, solver);

  const auto plain = maxflow_segment(g);
  if (plain.result.object != out.result.object)
    throw TrackingError("symbolic max-flow run diverged from the numeric run");
  return out;
}

SegmentationResult replay(const SegGraph& g, std::span<const std::uint8_t> decisions) {
  ForcedOracle oracle{decisions};
  bk::Solver<double, ForcedOracle> solver(numeric_network(g), oracle);
  solver.run();
  if (oracle.next != decisions.size()) throw TrackingError("forced replay left recorded decisions unused");
  return partition(g, solver);
}

} // namespace psegi
