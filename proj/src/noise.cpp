#include "psegi/noise.hpp"

#include "psegi/error.hpp"

#include <cmath>

namespace psegi {

NoiseModel NoiseModel::isotropic(double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw InputError("isotropic noise variance must be positive and finite");
  NoiseModel m;
  m.kind_ = Kind::isotropic;
  m.sigma2_ = sigma2;
  return m;
}

NoiseModel NoiseModel::full(Eigen::MatrixXd covariance) {
  if (covariance.rows() != covariance.cols() || covariance.rows() == 0)
    throw InputError("covariance must be a non-empty square matrix");
  if (!covariance.allFinite()) throw InputError("covariance has non-finite entries");
  const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, covariance.cwiseAbs().maxCoeff()))
    throw InputError("covariance must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) throw InputError("covariance is not positive definite");

  NoiseModel m;
  m.kind_ = Kind::full;
  m.sigma2_ = covariance.diagonal().mean();
  m.covariance_ = std::move(covariance);
  return m;
}

std::vector<double> NoiseModel::apply(std::span<const double> v) const {
  std::vector<double> out(v.size());
  if (kind_ == Kind::isotropic) {
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = sigma2_ * v[i];
    return out;
  }
  if (static_cast<std::size_t>(covariance_.rows()) != v.size())
    throw InputError("covariance dimension does not match the image");
  Eigen::Map<const Eigen::VectorXd> vin(v.data(), static_cast<Eigen::Index>(v.size()));
  Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) = covariance_ * vin;
  return out;
}

double NoiseModel::quadratic(std::span<const double> v) const {
  const auto sv = apply(v);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * sv[i];
  return acc;
}

NoiseModel estimate_noise(const Image& null_image) {
  const auto px = null_image.pixels();
  const double n = static_cast<double>(px.size());
  double mean = 0.0;
  for (double v : px) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : px) ss += (v - mean) * (v - mean);
  const double sigma2 = ss / n;
  if (!(sigma2 > 0.0)) throw InputError("null image is constant; noise variance is zero");
  return NoiseModel::isotropic(sigma2);
}

} // namespace psegi
