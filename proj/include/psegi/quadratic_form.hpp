#pragma once

#include "psegi/tau_poly.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <variant>
#include <vector>

namespace psegi {

/// Explicit (index, coefficient) entries.
struct SparseEntries {
  std::vector<std::pair<std::uint32_t, double>> entries;
};

/// Indicator of positions [first, last) of a shared pixel ordering.
struct OrderRange {
  std::shared_ptr<const std::vector<std::uint32_t>> order;
  std::size_t first = 0;
  std::size_t last = 0;
};

/// Indicator of the rectangle rows [row0, row1) x cols [col0, col1).
struct BoxWindow {
  std::size_t row0 = 0, row1 = 0, col0 = 0, col1 = 0;
  std::size_t area() const { return (row1 - row0) * (col1 - col0); }
};

/// A linear functional u' x kept in structural form so that window sums and
/// sorted-order ranges never expand into dense vectors.
class LinearForm {
public:
  struct Term {
    double scale = 1.0;
    std::variant<SparseEntries, OrderRange, BoxWindow> shape;
  };

  LinearForm() = default;

  static LinearForm unit(std::size_t i, double scale = 1.0);
  /// e_i - e_j
  static LinearForm difference(std::size_t i, std::size_t j);
  static LinearForm sparse(std::vector<std::pair<std::uint32_t, double>> entries);
  static LinearForm order_range(std::shared_ptr<const std::vector<std::uint32_t>> order,
                                std::size_t first, std::size_t last, double scale = 1.0);
  static LinearForm box(BoxWindow box, double scale = 1.0);

  LinearForm& add(const LinearForm& other, double scale = 1.0);
  LinearForm& operator*=(double s);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  double eval(std::span<const double> x, std::size_t width) const;
  std::vector<double> dense(std::size_t n, std::size_t width) const;

private:
  std::vector<Term> terms_;
};

/// x' A x + b' x + c with A = sum_k s_k u_k v_k' + identity_scale * I.
struct QuadraticForm {
  struct Product {
    double scale = 1.0;
    LinearForm u;
    LinearForm v;
  };

  std::vector<Product> products;
  double identity_scale = 0.0;
  LinearForm linear;
  double constant = 0.0;

  QuadraticForm& operator+=(const QuadraticForm& o);
  QuadraticForm& operator*=(double s);
  friend QuadraticForm operator-(QuadraticForm l, const QuadraticForm& r) {
    QuadraticForm neg = r;
    neg *= -1.0;
    return l += neg;
  }

  double eval(std::span<const double> x, std::size_t width) const;
};

/// The line x(tau) = z + tau y with lazily built summaries (integral images,
/// prefix sums along shared orderings) that make restriction of structural
/// forms cheap. Not thread-safe; create one per line.
class LineContext {
public:
  LineContext(std::span<const double> z, std::span<const double> y, std::size_t width,
              std::size_t height);

  std::size_t size() const { return z_.size(); }
  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::span<const double> z() const { return z_; }
  std::span<const double> y() const { return y_; }

  /// x_i(tau) as a degree-1 polynomial.
  TauPoly pixel(std::size_t i) const { return TauPoly::linear(z_[i], y_[i]); }
  /// u' x(tau).
  TauPoly restrict(const LinearForm& u);
  /// x(tau)' A x(tau) + b' x(tau) + c.
  TauPoly restrict(const QuadraticForm& q);

private:
  struct Prefix {
    std::vector<double> z, y;
  };
  const Prefix& prefix_for(const OrderRange& r);
  void build_integral();
  double box_sum(const std::vector<double>& integral, const BoxWindow& b) const;

  std::vector<double> z_, y_;
  std::size_t width_, height_;
  double zz_ = 0.0, zy_ = 0.0, yy_ = 0.0;
  std::vector<double> integral_z_, integral_y_;
  std::unordered_map<const void*, Prefix> prefixes_;
};

/// form(x) rel 0, stated on the image the segmentation algorithm saw.
struct StructuralConstraint {
  QuadraticForm form;
  Relation relation = Relation::le;
  Origin origin = Origin::test;

  /// Raw check on a full image, with the same closed-boundary convention as
  /// TauConstraint::holds.
  bool holds(std::span<const double> x, std::size_t width, double tol = 0.0) const;
};

/// Restricts each constraint to the line held by ctx, preserving order.
std::vector<TauConstraint> restrict_constraints(std::span<const StructuralConstraint> constraints,
                                                LineContext& ctx);

/// Restricts one structural form to the line z + tau y.
TauPoly reduce_quadratic_form(const QuadraticForm& q, std::span<const double> z,
                              std::span<const double> y, std::size_t width);

} // namespace psegi
