#include "psegi/preprocess.hpp"

#include "psegi/error.hpp"

#include <cmath>
#include <sstream>

namespace psegi {

FilterStage::FilterStage(int size, std::vector<double> kernel, std::string description)
    : size_(size), kernel_(std::move(kernel)), description_(std::move(description)) {}

FilterStage FilterStage::identity() { return FilterStage(1, {1.0}, "identity"); }

FilterStage FilterStage::gaussian_blur(int size, double sigma) {
  if (size < 1 || size % 2 == 0) throw InputError("blur size must be a positive odd integer");
  if (sigma <= 0.0) sigma = size > 1 ? (size - 1) / 6.0 : 1.0;
  const int h = size / 2;
  std::vector<double> g(static_cast<std::size_t>(size));
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - h;
    g[i] = std::exp(-0.5 * d * d / (sigma * sigma));
    sum += g[i];
  }
  for (auto& v : g) v /= sum;
  std::vector<double> k(static_cast<std::size_t>(size * size));
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) k[i * size + j] = g[i] * g[j];
  std::ostringstream os;
  os << "gaussian_blur(" << size << ", sigma=" << sigma << ")";
  return FilterStage(size, std::move(k), os.str());
}

FilterStage FilterStage::conv3x3(const std::array<double, 9>& coefficients) {
  std::ostringstream os;
  os << "conv3x3[";
  for (std::size_t i = 0; i < 9; ++i) os << (i ? "," : "") << coefficients[i];
  os << "]";
  return FilterStage(3, std::vector<double>(coefficients.begin(), coefficients.end()), os.str());
}

FilterStage FilterStage::conv3x3_vec(const std::array<double, 9>& vec) {
  std::array<double, 9> rows{};
  for (std::size_t col = 0; col < 3; ++col)
    for (std::size_t row = 0; row < 3; ++row) rows[row * 3 + col] = vec[col * 3 + row];
  return conv3x3(rows);
}

LinearPreprocess::LinearPreprocess(std::vector<FilterStage> stages, Boundary boundary)
    : stages_(std::move(stages)), boundary_(boundary) {}

bool LinearPreprocess::is_identity() const {
  for (const auto& s : stages_)
    if (!s.is_identity()) return false;
  return true;
}

namespace {

// Resolves a possibly out-of-range coordinate; returns -1 for a zero pad.
long resolve(long i, long extent, Boundary b) {
  if (i >= 0 && i < extent) return i;
  if (b == Boundary::zero) return -1;
  return i < 0 ? 0 : extent - 1;
}

template <bool Adjoint>
std::vector<double> run_stage(const FilterStage& st, std::span<const double> in, long w, long h,
                              Boundary b) {
  std::vector<double> out(in.size(), 0.0);
  const long k = st.size();
  const long half = k / 2;
  const auto ker = st.kernel();
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c) {
      const long o = r * w + c;
      double acc = 0.0;
      for (long i = 0; i < k; ++i) {
        const long rr = resolve(r + i - half, h, b);
        if (rr < 0) continue;
        for (long j = 0; j < k; ++j) {
          const double coef = ker[i * k + j];
          if (coef == 0.0) continue;
          const long cc = resolve(c + j - half, w, b);
          if (cc < 0) continue;
          if constexpr (Adjoint)
            out[rr * w + cc] += coef * in[o];
          else
            acc += coef * in[rr * w + cc];
        }
      }
      if constexpr (!Adjoint) out[o] = acc;
    }
  }
  return out;
}

} // namespace

std::vector<double> LinearPreprocess::apply(std::span<const double> v, std::size_t width,
                                            std::size_t height) const {
  if (v.size() != width * height) throw InputError("preprocess shape mismatch");
  std::vector<double> cur(v.begin(), v.end());
  for (const auto& st : stages_) {
    if (st.is_identity()) continue;
    cur = run_stage<false>(st, cur, static_cast<long>(width), static_cast<long>(height), boundary_);
  }
  return cur;
}

std::vector<double> LinearPreprocess::apply_adjoint(std::span<const double> v, std::size_t width,
                                                    std::size_t height) const {
  if (v.size() != width * height) throw InputError("preprocess shape mismatch");
  std::vector<double> cur(v.begin(), v.end());
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
    if (it->is_identity()) continue;
    cur = run_stage<true>(*it, cur, static_cast<long>(width), static_cast<long>(height), boundary_);
  }
  return cur;
}

Image LinearPreprocess::apply(const Image& img) const {
  return img.with_pixels(apply(img.pixels(), img.width(), img.height()));
}

std::string LinearPreprocess::describe() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < stages_.size(); ++i) os << (i ? ", " : "") << stages_[i].describe();
  os << "] boundary=" << (boundary_ == Boundary::replicate ? "replicate" : "zero");
  return os.str();
}

} // namespace psegi
