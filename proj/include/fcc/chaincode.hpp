#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fcc/raster.hpp"

namespace fcc {

/// Freeman direction numbering. Codes run counterclockwise from East:
///
///   8-dir:  3 2 1      4-dir:    1
///           4 . 0              2 . 0
///           5 6 7                3
///
/// Rows grow downward, so North is row - 1.
class DirectionScheme {
 public:
  static DirectionScheme four() { return DirectionScheme(4); }
  static DirectionScheme eight() { return DirectionScheme(8); }
  /// Throws std::invalid_argument unless connectivity is 4 or 8.
  static DirectionScheme from_connectivity(int connectivity);

  int connectivity() const noexcept { return connectivity_; }
  /// Unit (drow, dcol) for `code`.
  Pixel step(int code) const;
  /// Inverse of step(); -1 when (drow, dcol) is not a unit move of this scheme.
  int code_of(int drow, int dcol) const noexcept;
  int opposite(int code) const noexcept { return (code + connectivity_ / 2) % connectivity_; }

  friend bool operator==(const DirectionScheme&, const DirectionScheme&) = default;

 private:
  explicit DirectionScheme(int connectivity) : connectivity_(connectivity) {}
  int connectivity_;
};

struct ChainCode {
  Pixel start;
  DirectionScheme scheme = DirectionScheme::eight();
  std::vector<std::uint8_t> codes;

  /// Codes as concatenated digits, e.g. "0642".
  std::string to_string() const;
};

struct CodeHistogram {
  std::vector<std::size_t> counts;
  std::size_t total = 0;
};

/// Clockwise outer-boundary walk of the component containing `seed`.
///
/// The walk starts at the component's topmost-then-leftmost pixel and scans
/// neighbours clockwise beginning from West (Moore neighbour tracing; the
/// 4-dir scheme scans edge neighbours only). It stops when the first move out
/// of the start pixel is about to be repeated, which handles one-pixel-wide
/// strokes that pass through the start more than once. Holes are not traced.
///
/// Throws TraceError if the image has no foreground, `seed` is background or
/// out of bounds, or (4-dir) the seed's 8-connected component is not
/// 4-connected.
ChainCode trace_boundary(const BinaryImage& img, Pixel seed, DirectionScheme scheme);

/// Pixels visited by the code, starting at `start`; size is codes.size() + 1.
/// Throws std::domain_error if a coordinate goes negative.
std::vector<Pixel> decode(const ChainCode& cc);

Pixel net_displacement(const ChainCode& cc);

CodeHistogram code_histogram(const ChainCode& cc);

/// counts / total. Throws RecognitionError when total is zero.
std::vector<double> normalize(const CodeHistogram& h);

}  // namespace fcc
