#include "psegi/synthetic.hpp"

#include "psegi/error.hpp"

#include <cmath>
#include <random>

namespace psegi {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  const std::uint64_t base = splitmix64(s);
  std::uint64_t t = base ^ (index * 0xd1b54a32d192ed03ULL);
  return splitmix64(t);
}

double null_variance(NullMode mode) { return mode == NullMode::fpr ? 0.5 : 0.01; }

Image gen_null_image(std::size_t n, std::uint64_t seed, NullMode mode) {
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n < 4 || side * side != n) throw InputError("null image size must be a perfect square >= 4");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.5, std::sqrt(null_variance(mode)));
  std::vector<double> px(n);
  for (double& v : px) v = noise(rng);
  return Image(side, side, std::move(px));
}

namespace {

std::pair<std::size_t, std::size_t> dims(SignalScale scale) {
  return scale == SignalScale::desk ? std::pair<std::size_t, std::size_t>{20, 10}
                                    : std::pair<std::size_t, std::size_t>{100, 50};
}

} // namespace

std::vector<std::uint8_t> signal_block_mask(SignalScale scale) {
  const auto [side, block] = dims(scale);
  std::vector<std::uint8_t> m(side * side, 0);
  for (std::size_t r = 0; r < block; ++r)
    for (std::size_t c = 0; c < block; ++c) m[r * side + c] = 1;
  return m;
}

Image gen_signal_image(double mu_s, double mu_t, double sigma, std::uint64_t seed, SignalScale scale) {
  if (!(sigma > 0.0) || !std::isfinite(mu_s) || !std::isfinite(mu_t))
    throw InputError("signal image needs finite means and a positive sigma");
  const auto [side, block] = dims(scale);
  const auto mask = signal_block_mask(scale);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> px(side * side);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = (mask[i] ? mu_s : mu_t) + noise(rng);
  return Image(side, side, std::move(px));
}

} // namespace psegi
