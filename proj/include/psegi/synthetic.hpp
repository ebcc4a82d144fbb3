#pragma once

#include "psegi/image.hpp"

#include <cstdint>

namespace psegi {

/// One SplitMix64 step: advances state and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed of trial `index` under `master`, independent of the order in which
/// trials run.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index);

enum class NullMode {
  /// N(0.5, 0.5) per pixel.
  fpr,
  /// N(0.5, 0.1^2) per pixel.
  small_noise,
};

double null_variance(NullMode mode);

/// sqrt(n) x sqrt(n) image of i.i.d. null pixels. Throws InputError unless
/// n is a perfect square >= 4.
Image gen_null_image(std::size_t n, std::uint64_t seed, NullMode mode = NullMode::fpr);

enum class SignalScale {
  /// 20 x 20 image, 10 x 10 block.
  desk,
  /// 100 x 100 image, 50 x 50 block.
  full,
};

/// Mean mu_s in the upper-left block and mu_t elsewhere, plus N(0, sigma^2)
/// noise.
Image gen_signal_image(double mu_s, double mu_t, double sigma, std::uint64_t seed,
                       SignalScale scale = SignalScale::desk);

/// 1 inside the upper-left block of gen_signal_image, 0 elsewhere.
std::vector<std::uint8_t> signal_block_mask(SignalScale scale);

} // namespace psegi
