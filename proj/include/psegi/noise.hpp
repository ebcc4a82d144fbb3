#pragma once

#include "psegi/image.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace psegi {

/// Gaussian noise covariance of the observed image: either sigma2 * I or a
/// dense symmetric positive definite matrix.
class NoiseModel {
public:
  enum class Kind { isotropic, full };

  static NoiseModel isotropic(double sigma2);
  static NoiseModel full(Eigen::MatrixXd covariance);

  Kind kind() const { return kind_; }
  /// Isotropic variance, or the mean of the diagonal for a full covariance.
  double sigma2() const { return sigma2_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }

  /// Sigma * v.
  std::vector<double> apply(std::span<const double> v) const;
  /// v' Sigma v.
  double quadratic(std::span<const double> v) const;

private:
  NoiseModel() = default;

  Kind kind_ = Kind::isotropic;
  double sigma2_ = 0.0;
  Eigen::MatrixXd covariance_;
};

/// Maximum-likelihood isotropic variance (divisor n) of an object-free image.
NoiseModel estimate_noise(const Image& null_image);

} // namespace psegi
