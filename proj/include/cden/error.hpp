/*
  Error types shared across the library.

  Plain-input problems (bad argument values, incompatible metric/kind
  combinations, empty corpora passed to reductions) throw
  std::invalid_argument directly; the classes below cover the cases a
  caller may want to distinguish.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace cden {

// Input bytes could not be decoded as a supported image format.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operation was asked about a color bin that has no pixels.
class EmptyBinError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An image directory yielded no decodable images.
class EmptyCorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A persisted index file could not be parsed (bad tag, bad record shape).
class IndexFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The index header declares a format version this build does not read.
class IndexVersionError : public IndexFormatError {
 public:
  using IndexFormatError::IndexFormatError;
};

// The index header declares an unknown descriptor kind.
class IndexKindError : public IndexFormatError {
 public:
  using IndexFormatError::IndexFormatError;
};

}  // namespace cden
