#include "doctest.h"

#include "psegi/error.hpp"
#include "psegi/quadratic_form.hpp"
#include "psegi/truncation_set.hpp"

#include <Eigen/Dense>

#include <numeric>
#include <random>

using namespace psegi;

namespace {

TauConstraint con(double a, double b, double c, Relation r) { return {{a, b, c}, r, Origin::test}; }

std::vector<Interval> ivs(const TruncationSet& s) { return s.intervals(); }

} // namespace

TEST_CASE("solve_constraint closed-form cases") {
  CHECK(ivs(solve_constraint(con(1, 0, -1, Relation::le))) == std::vector<Interval>{{0, 1}});
  CHECK(ivs(solve_constraint(con(0, 0, -1, Relation::le))) == std::vector<Interval>{{0, kInf}});
  CHECK(ivs(solve_constraint(con(1, -5, 6, Relation::ge))) == std::vector<Interval>{{0, 2}, {3, kInf}});
  CHECK(solve_constraint(con(0, 0, 1, Relation::le)).is_empty());
  CHECK(ivs(solve_constraint(con(0, 2, -3, Relation::le))) == std::vector<Interval>{{0, 1.5}});
  CHECK(ivs(solve_constraint(con(0, -2, 3, Relation::lt))) == std::vector<Interval>{{1.5, kInf}});
  CHECK(solve_constraint(con(1, 0, 1, Relation::le)).is_empty());
  CHECK(ivs(solve_constraint(con(-1, 0, -1, Relation::le))) == std::vector<Interval>{{0, kInf}});
  CHECK_THROWS_AS(solve_constraint(con(std::nan(""), 0, 0, Relation::le)), TrackingError);
}

TEST_CASE("roots keep precision when b dominates") {
  // Roots 1e-8 and 1e8.
  const auto s = solve_constraint(con(1, -(1e8 + 1e-8), 1, Relation::le));
  REQUIRE(s.intervals().size() == 1);
  CHECK(s.intervals()[0].lo == doctest::Approx(1e-8).epsilon(1e-12));
  CHECK(s.intervals()[0].hi == doctest::Approx(1e8).epsilon(1e-12));
}

TEST_CASE("intersection examples and identity") {
  const auto a = TruncationSet::from_intervals({{0, 1}});
  CHECK(intersect(a, TruncationSet{}) == a);
  const auto b = TruncationSet::from_intervals({{0, 2}, {3, kInf}});
  const auto c = TruncationSet::from_intervals({{1, 4}});
  CHECK(ivs(intersect(b, c)) == std::vector<Interval>{{1, 2}, {3, 4}});
  CHECK(intersect(std::span<const TruncationSet>{}) == TruncationSet{});
}

TEST_CASE("from_intervals normalizes") {
  const auto s = TruncationSet::from_intervals({{3, 4}, {-2, 1}, {0.5, 2}, {5, 4}, {4 + 1e-14, 6}});
  CHECK(ivs(s) == std::vector<Interval>{{0, 2}, {3, 6}});
  CHECK(s.measure() == doctest::Approx(5.0));
}

TEST_CASE("intersect is idempotent, commutative and monotone") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  auto random_set = [&] {
    std::vector<Interval> v;
    for (int k = 0; k < 3; ++k) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      v.push_back({a, b});
    }
    return TruncationSet::from_intervals(v);
  };
  for (int t = 0; t < 200; ++t) {
    const auto a = random_set(), b = random_set(), c = random_set();
    CHECK(intersect(a, a) == a);
    CHECK(intersect(a, b) == intersect(b, a));
    CHECK(intersect(intersect(a, b), c) == intersect(a, intersect(b, c)));
    const auto ab = intersect(a, b);
    for (const auto& iv : ab.intervals()) {
      const double mid = 0.5 * (iv.lo + iv.hi);
      CHECK(a.contains(mid));
      CHECK(b.contains(mid));
    }
  }
}

TEST_CASE("membership by evaluation agrees with solved intervals") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> coef(0.0, 1.0);
  std::uniform_real_distribution<double> tau(0.0, 5.0);
  const Relation rels[] = {Relation::le, Relation::lt, Relation::ge, Relation::gt};
  std::size_t checked = 0;
  for (int k = 0; k < 1000; ++k) {
    auto c = con(coef(rng), coef(rng), coef(rng), rels[k % 4]);
    if (k % 10 == 0) c.poly.a = 0.0;
    const auto s = solve_constraint(c);
    for (int j = 0; j < 100; ++j) {
      const double t = tau(rng);
      if (std::abs(c.poly.eval(t)) < 1e-9) continue; // boundary band
      CHECK(c.holds(t) == s.contains(t));
      ++checked;
    }
  }
  CHECK(checked > 90000);
}

TEST_CASE("intersect_constraints reports the offending origin") {
  std::vector<TauConstraint> cs{con(0, 1, -2, Relation::le), {{0, 1, -1}, Relation::le, Origin::gc_grow}};
  try {
    intersect_constraints(cs, 1.5);
    FAIL("expected a tracking error");
  } catch (const TrackingError& e) {
    CHECK(std::string(e.what()).find("gc:grow") != std::string::npos);
  }
  const auto e = intersect_constraints(std::span(cs).first(1), 1.5);
  CHECK(ivs(e) == std::vector<Interval>{{0, 2}});
  // A violated constant constraint is a tracking error, not a silent clip.
  std::vector<TauConstraint> bad{con(0, 0, 1e-3, Relation::le)};
  CHECK_THROWS_AS(intersect_constraints(bad, 1.0), TrackingError);
}

TEST_CASE("observed statistic on a boundary survives rounding") {
  std::vector<TauConstraint> cs{con(0, 1, -1.0, Relation::le), con(0, 1, -(1.0 + 1e-12), Relation::ge)};
  const auto e = intersect_constraints(cs, 1.0);
  CHECK(e.contains(1.0));
}

TEST_CASE("truncation set JSON uses the string inf") {
  nlohmann::json j = TruncationSet::from_intervals({{0.5, 1}, {2, kInf}});
  CHECK(j.dump() == R"([[0.5,1.0],[2.0,"inf"]])");
}

TEST_CASE("reduce_quadratic_form examples") {
  const std::size_t n = 4;
  std::vector<double> z(n, 0.0), y(n, 0.0);
  y[0] = 1.0;
  QuadraticForm q;
  q.products.push_back({1.0, LinearForm::difference(0, 1), LinearForm::difference(0, 1)});
  q.constant = -0.04;
  CHECK(reduce_quadratic_form(q, z, y, 2) == TauPoly{1.0, 0.0, -0.04});

  QuadraticForm lin;
  lin.linear = LinearForm::difference(0, 1);
  const std::vector<double> z2{3, 1, 0, 0}, zero(n, 0.0);
  CHECK(reduce_quadratic_form(lin, z2, zero, 2) == TauPoly{0, 0, 2});

  QuadraticForm id;
  id.identity_scale = 1.0;
  id.constant = 0.7;
  std::vector<double> e1(n, 0.0);
  e1[0] = 1.0;
  const auto p = reduce_quadratic_form(id, e1, e1, 2);
  CHECK(p == TauPoly{1, 2, 1.7});
}

TEST_CASE("structural reduction matches dense algebra") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> dim(2, 7);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t w = dim(rng), h = dim(rng), n = w * h;
    auto order = std::make_shared<std::vector<std::uint32_t>>(n);
    std::iota(order->begin(), order->end(), 0u);
    std::shuffle(order->begin(), order->end(), rng);
    auto random_form = [&] {
      LinearForm f = LinearForm::sparse({{static_cast<std::uint32_t>(rng() % n), g(rng)},
                                         {static_cast<std::uint32_t>(rng() % n), g(rng)}});
      const std::size_t a = rng() % n, b = rng() % n;
      f.add(LinearForm::order_range(order, std::min(a, b), std::max(a, b) + 1), g(rng));
      BoxWindow box{rng() % h, 0, rng() % w, 0};
      box.row1 = box.row0 + 1 + rng() % (h - box.row0);
      box.col1 = box.col0 + 1 + rng() % (w - box.col0);
      f.add(LinearForm::box(box), g(rng));
      return f;
    };
    QuadraticForm q;
    for (int k = 0; k < 3; ++k) q.products.push_back({g(rng), random_form(), random_form()});
    q.identity_scale = g(rng);
    q.linear = random_form();
    q.constant = g(rng);

    Eigen::MatrixXd A = q.identity_scale * Eigen::MatrixXd::Identity(n, n);
    for (const auto& p : q.products) {
      const auto u = p.u.dense(n, w), v = p.v.dense(n, w);
      A += p.scale * Eigen::Map<const Eigen::VectorXd>(u.data(), n) * Eigen::Map<const Eigen::VectorXd>(v.data(), n).transpose();
    }
    const auto bv = q.linear.dense(n, w);
    const Eigen::Map<const Eigen::VectorXd> b(bv.data(), n);

    std::vector<double> z(n), y(n);
    for (auto& v : z) v = g(rng);
    for (auto& v : y) v = g(rng);
    const auto poly = reduce_quadratic_form(q, z, y, w);
    for (double tau : {0.0, 0.3, 1.0, 2.5, -1.2}) {
      Eigen::VectorXd x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = z[i] + tau * y[i];
      const double dense = x.dot(A * x) + b.dot(x) + q.constant;
      const double scale = std::max(1.0, std::abs(x.dot(A.cwiseAbs() * x.cwiseAbs())) + std::abs(q.constant));
      CHECK(std::abs(poly.eval(tau) - dense) <= 1e-10 * scale);
      CHECK(std::abs(q.eval(std::vector<double>(x.data(), x.data() + n), w) - dense) <= 1e-10 * scale);
    }
  }
}
