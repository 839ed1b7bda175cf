#pragma once

#include <stdexcept>
#include <string>

namespace seamweld {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened or read/written.
class IoError : public Error {
 public:
  using Error::Error;
};

// File opened but its content is not a supported image/matrix format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// The two image footprints share no canvas pixel.
class NoOverlapError : public Error {
 public:
  using Error::Error;
};

// Difference field is constant: Otsu cannot split a one-bin histogram.
class DegenerateHistogramError : public Error {
 public:
  using Error::Error;
};

// Overlap geometry puts one pixel on both image borders (sliver overlap).
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

// Caller-supplied argument violates a documented precondition.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace seamweld
