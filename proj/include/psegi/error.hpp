#pragma once

#include <stdexcept>
#include <string>

namespace psegi {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: unreadable file, malformed image, invalid parameter.
class InputError : public Error {
public:
  using Error::Error;
};

/// The segmentation algorithm could not produce a two-region partition.
class SegmentationError : public Error {
public:
  using Error::Error;
};

/// A recorded selection-event constraint is violated by the observed image,
/// or a symbolic re-execution diverged from the numeric run.
class TrackingError : public Error {
public:
  using Error::Error;
};

/// The conditional support has no representable probability mass.
class DegenerateEventError : public Error {
public:
  using Error::Error;
};

} // namespace psegi
