#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fcc {

/// Malformed Netpbm or template input. `offset()` is the byte (or line, for
/// line-oriented formats) where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at byte " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Boundary tracing could not start or could not close under the requested scheme.
class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A classification precondition failed (empty template set, degenerate glyph, ...).
class RecognitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fcc
