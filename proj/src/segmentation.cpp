#include "psegi/segmentation.hpp"

#include "psegi/error.hpp"

#include <algorithm>

namespace psegi {

std::string to_string(Algo a) {
  switch (a) {
  case Algo::gc: return "gc";
  case Algo::th_global: return "th-global";
  case Algo::th_local: return "th-local";
  }
  return "?";
}

Algo parse_algo(const std::string& name) {
  if (name == "gc") return Algo::gc;
  if (name == "th-global") return Algo::th_global;
  if (name == "th-local") return Algo::th_local;
  throw InputError("unknown algorithm '" + name + "' (expected gc, th-global or th-local)");
}

std::size_t SegmentationResult::object_count() const {
  return static_cast<std::size_t>(std::count(object.begin(), object.end(), std::uint8_t{1}));
}

bool SegmentationResult::degenerate() const {
  const std::size_t k = object_count();
  return k == 0 || k == object.size();
}

} // namespace psegi
