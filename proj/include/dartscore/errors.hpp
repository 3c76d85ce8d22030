#pragma once

#include <stdexcept>
#include <string>

namespace dartscore {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point configuration for which no unique homography exists, or a matrix
// that is numerically singular.
class DegenerateConfiguration : public Error {
 public:
  using Error::Error;
};

// A point mapped onto (or past) the line at infinity.
class PointAtInfinity : public Error {
 public:
  using Error::Error;
};

// Perspective-warp draws kept producing singular matrices.
class DegenerateWarp : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

// Scene sampling constraints could not be met within the retry budget.
class RetryExhausted : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `where` names the file/line/field.
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error(where + ": " + what) {}
};

}  // namespace dartscore
