#pragma once

#include "psegi/image.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace psegi {

enum class Boundary { replicate, zero };

/// One linear filtering stage, stored as an odd-sized square correlation
/// kernel: out(r, c) = sum_{i,j} k(i, j) * in(r + i - h, c + j - h).
class FilterStage {
public:
  static FilterStage identity();
  /// Separable Gaussian truncated to size x size and renormalized to sum 1.
  /// sigma <= 0 selects the default (size - 1) / 6.
  static FilterStage gaussian_blur(int size, double sigma = 0.0);
  /// Row-major 3x3 coefficients, first entry is the upper-left neighbour.
  static FilterStage conv3x3(const std::array<double, 9>& coefficients);
  /// Same kernel given as vec(F): columns stacked top to bottom.
  static FilterStage conv3x3_vec(const std::array<double, 9>& vec);

  int size() const { return size_; }
  std::span<const double> kernel() const { return kernel_; }
  const std::string& describe() const { return description_; }
  bool is_identity() const { return size_ == 1 && kernel_[0] == 1.0; }

private:
  FilterStage(int size, std::vector<double> kernel, std::string description);

  int size_;
  std::vector<double> kernel_;
  std::string description_;
};

/// Fixed linear map L composed from filter stages, applied in order.
class LinearPreprocess {
public:
  LinearPreprocess() = default;
  explicit LinearPreprocess(std::vector<FilterStage> stages, Boundary boundary = Boundary::replicate);

  bool is_identity() const;
  Boundary boundary() const { return boundary_; }
  const std::vector<FilterStage>& stages() const { return stages_; }

  Image apply(const Image& img) const;
  /// L v for a row-major vector of the given shape.
  std::vector<double> apply(std::span<const double> v, std::size_t width, std::size_t height) const;
  /// L' v.
  std::vector<double> apply_adjoint(std::span<const double> v, std::size_t width,
                                    std::size_t height) const;

  std::string describe() const;

private:
  std::vector<FilterStage> stages_;
  Boundary boundary_ = Boundary::replicate;
};

} // namespace psegi
