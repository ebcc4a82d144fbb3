#include "psegi/quadratic_form.hpp"

#include "psegi/error.hpp"

namespace psegi {

LinearForm LinearForm::unit(std::size_t i, double scale) {
  return sparse({{static_cast<std::uint32_t>(i), scale}});
}

LinearForm LinearForm::difference(std::size_t i, std::size_t j) {
  return sparse({{static_cast<std::uint32_t>(i), 1.0}, {static_cast<std::uint32_t>(j), -1.0}});
}

LinearForm LinearForm::sparse(std::vector<std::pair<std::uint32_t, double>> entries) {
  LinearForm f;
  f.terms_.push_back({1.0, SparseEntries{std::move(entries)}});
  return f;
}

LinearForm LinearForm::order_range(std::shared_ptr<const std::vector<std::uint32_t>> order,
                                   std::size_t first, std::size_t last, double scale) {
  LinearForm f;
  f.terms_.push_back({scale, OrderRange{std::move(order), first, last}});
  return f;
}

LinearForm LinearForm::box(BoxWindow box, double scale) {
  LinearForm f;
  f.terms_.push_back({scale, box});
  return f;
}

LinearForm& LinearForm::add(const LinearForm& other, double scale) {
  for (auto t : other.terms_) {
    t.scale *= scale;
    terms_.push_back(std::move(t));
  }
  return *this;
}

LinearForm& LinearForm::operator*=(double s) {
  for (auto& t : terms_) t.scale *= s;
  return *this;
}

namespace {

template <class Visit>
void for_each_entry(const LinearForm::Term& t, std::size_t width, Visit&& visit) {
  if (const auto* s = std::get_if<SparseEntries>(&t.shape)) {
    for (const auto& [i, v] : s->entries) visit(i, v);
  } else if (const auto* r = std::get_if<OrderRange>(&t.shape)) {
    for (std::size_t k = r->first; k < r->last; ++k) visit((*r->order)[k], 1.0);
  } else {
    const auto& b = std::get<BoxWindow>(t.shape);
    for (std::size_t row = b.row0; row < b.row1; ++row)
      for (std::size_t col = b.col0; col < b.col1; ++col) visit(row * width + col, 1.0);
  }
}

} // namespace

double LinearForm::eval(std::span<const double> x, std::size_t width) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    double part = 0.0;
    for_each_entry(t, width, [&](std::size_t i, double v) { part += v * x[i]; });
    acc += t.scale * part;
  }
  return acc;
}

std::vector<double> LinearForm::dense(std::size_t n, std::size_t width) const {
  std::vector<double> out(n, 0.0);
  for (const auto& t : terms_)
    for_each_entry(t, width, [&](std::size_t i, double v) { out[i] += t.scale * v; });
  return out;
}

QuadraticForm& QuadraticForm::operator+=(const QuadraticForm& o) {
  products.insert(products.end(), o.products.begin(), o.products.end());
  identity_scale += o.identity_scale;
  linear.add(o.linear);
  constant += o.constant;
  return *this;
}

QuadraticForm& QuadraticForm::operator*=(double s) {
  for (auto& p : products) p.scale *= s;
  identity_scale *= s;
  linear *= s;
  constant *= s;
  return *this;
}

double QuadraticForm::eval(std::span<const double> x, std::size_t width) const {
  double acc = constant + linear.eval(x, width);
  for (const auto& p : products) acc += p.scale * p.u.eval(x, width) * p.v.eval(x, width);
  if (identity_scale != 0.0) {
    double xx = 0.0;
    for (double v : x) xx += v * v;
    acc += identity_scale * xx;
  }
  return acc;
}

LineContext::LineContext(std::span<const double> z, std::span<const double> y, std::size_t width,
                         std::size_t height)
    : z_(z.begin(), z.end()), y_(y.begin(), y.end()), width_(width), height_(height) {
  if (z.size() != y.size() || z.size() != width * height)
    throw InputError("line context shape mismatch");
  for (std::size_t i = 0; i < z_.size(); ++i) {
    zz_ += z_[i] * z_[i];
    zy_ += z_[i] * y_[i];
    yy_ += y_[i] * y_[i];
  }
}

void LineContext::build_integral() {
  const std::size_t w1 = width_ + 1;
  integral_z_.assign(w1 * (height_ + 1), 0.0);
  integral_y_.assign(w1 * (height_ + 1), 0.0);
  for (std::size_t r = 0; r < height_; ++r) {
    double rz = 0.0, ry = 0.0;
    for (std::size_t c = 0; c < width_; ++c) {
      rz += z_[r * width_ + c];
      ry += y_[r * width_ + c];
      integral_z_[(r + 1) * w1 + c + 1] = integral_z_[r * w1 + c + 1] + rz;
      integral_y_[(r + 1) * w1 + c + 1] = integral_y_[r * w1 + c + 1] + ry;
    }
  }
}

double LineContext::box_sum(const std::vector<double>& integral, const BoxWindow& b) const {
  const std::size_t w1 = width_ + 1;
  return integral[b.row1 * w1 + b.col1] - integral[b.row0 * w1 + b.col1] -
         integral[b.row1 * w1 + b.col0] + integral[b.row0 * w1 + b.col0];
}

const LineContext::Prefix& LineContext::prefix_for(const OrderRange& r) {
  auto it = prefixes_.find(r.order.get());
  if (it != prefixes_.end()) return it->second;
  Prefix p;
  const auto& ord = *r.order;
  p.z.assign(ord.size() + 1, 0.0);
  p.y.assign(ord.size() + 1, 0.0);
  for (std::size_t k = 0; k < ord.size(); ++k) {
    p.z[k + 1] = p.z[k] + z_[ord[k]];
    p.y[k + 1] = p.y[k] + y_[ord[k]];
  }
  return prefixes_.emplace(r.order.get(), std::move(p)).first->second;
}

TauPoly LineContext::restrict(const LinearForm& u) {
  double uz = 0.0, uy = 0.0;
  for (const auto& t : u.terms()) {
    double pz = 0.0, py = 0.0;
    if (const auto* s = std::get_if<SparseEntries>(&t.shape)) {
      for (const auto& [i, v] : s->entries) {
        pz += v * z_[i];
        py += v * y_[i];
      }
    } else if (const auto* r = std::get_if<OrderRange>(&t.shape)) {
      const auto& p = prefix_for(*r);
      pz = p.z[r->last] - p.z[r->first];
      py = p.y[r->last] - p.y[r->first];
    } else {
      if (integral_z_.empty()) build_integral();
      const auto& b = std::get<BoxWindow>(t.shape);
      pz = box_sum(integral_z_, b);
      py = box_sum(integral_y_, b);
    }
    uz += t.scale * pz;
    uy += t.scale * py;
  }
  return TauPoly::linear(uz, uy);
}

TauPoly LineContext::restrict(const QuadraticForm& q) {
  TauPoly out = restrict(q.linear);
  out.c += q.constant;
  for (const auto& p : q.products) out += p.scale * TauPoly::product(restrict(p.u), restrict(p.v));
  if (q.identity_scale != 0.0) out += q.identity_scale * TauPoly{yy_, 2.0 * zy_, zz_};
  return out;
}

bool StructuralConstraint::holds(std::span<const double> x, std::size_t width, double tol) const {
  const double v = form.eval(x, width);
  return is_upper(relation) ? v <= tol : v >= -tol;
}

std::vector<TauConstraint> restrict_constraints(std::span<const StructuralConstraint> constraints,
                                                LineContext& ctx) {
  std::vector<TauConstraint> out;
  out.reserve(constraints.size());
  for (const auto& c : constraints) out.push_back({ctx.restrict(c.form), c.relation, c.origin});
  return out;
}

TauPoly reduce_quadratic_form(const QuadraticForm& q, std::span<const double> z,
                              std::span<const double> y, std::size_t width) {
  if (width == 0 || z.size() % width != 0) throw InputError("width does not divide vector length");
  LineContext ctx(z, y, width, z.size() / width);
  return ctx.restrict(q);
}

} // namespace psegi
