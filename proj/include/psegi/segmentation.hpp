#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace psegi {

enum class Algo { gc, th_global, th_local };

std::string to_string(Algo a);
/// Accepts "gc", "th-global", "th-local".
Algo parse_algo(const std::string& name);

/// Two-region partition of an image; object[i] is 1 for object pixels.
struct SegmentationResult {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> object;
  std::vector<std::uint32_t> object_seeds;
  std::vector<std::uint32_t> background_seeds;

  std::size_t object_count() const;
  /// True when one region is empty, which leaves no contrast to test.
  bool degenerate() const;
};

} // namespace psegi
