#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fcc {

/// Pixel coordinate, row grows downward.
struct Pixel {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Row-major raster with positive dimensions. `Tag` keeps gray and binary
/// images apart at the type level even though both store bytes.
template <typename Tag>
class Raster {
 public:
  Raster(int width, int height, std::uint8_t fill = 0)
      : width_(checked_dim(width)), height_(checked_dim(height)),
        pixels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

  Raster(int width, int height, std::vector<std::uint8_t> pixels)
      : width_(checked_dim(width)), height_(checked_dim(height)), pixels_(std::move(pixels)) {
    if (pixels_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
      throw std::invalid_argument("raster: pixel count does not match width x height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  bool contains(int row, int col) const noexcept {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }
  bool contains(Pixel p) const noexcept { return contains(p.row, p.col); }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 protected:
  std::uint8_t raw(int row, int col) const { return pixels_[index(row, col)]; }
  std::uint8_t& raw(int row, int col) { return pixels_[index(row, col)]; }

 private:
  static int checked_dim(int v) {
    if (v <= 0) throw std::invalid_argument("raster: dimensions must be positive");
    return v;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Grayscale intensities 0..255, 0 = black.
class GrayImage : public Raster<struct GrayTag> {
 public:
  using Raster::Raster;

  std::uint8_t at(int row, int col) const { return raw(row, col); }
  void set(int row, int col, std::uint8_t v) { raw(row, col) = v; }
};

/// Foreground mask; stored as 0/1 bytes, true = character stroke.
class BinaryImage : public Raster<struct BinaryTag> {
 public:
  BinaryImage(int width, int height, bool fill = false)
      : Raster(width, height, static_cast<std::uint8_t>(fill ? 1 : 0)) {}
  BinaryImage(int width, int height, std::vector<std::uint8_t> pixels);

  bool at(int row, int col) const { return raw(row, col) != 0; }
  bool at(Pixel p) const { return at(p.row, p.col); }
  /// Out-of-bounds reads are background.
  bool fg(int row, int col) const { return contains(row, col) && at(row, col); }
  void set(int row, int col, bool v) { raw(row, col) = v ? 1 : 0; }

  std::size_t count() const noexcept;
};

using Image = std::variant<GrayImage, BinaryImage>;

enum class NetpbmFormat { P1, P2, P4, P5 };

/// Parses a P1/P2/P4/P5 file. P1/P4 yield a BinaryImage with bit 1 as
/// foreground; P2/P5 yield a GrayImage and require maxval 255.
/// Throws ParseError naming the byte offset of the problem.
Image load_image(std::span<const std::uint8_t> bytes);
Image load_image_file(const std::string& path);

/// Serializes `img`. Binary images go to P1/P4 and gray images to P2/P5;
/// any other pairing throws std::invalid_argument.
std::vector<std::uint8_t> save_image(const Image& img, NetpbmFormat format);
void save_image_file(const Image& img, NetpbmFormat format, const std::string& path);

/// Otsu level: the threshold t maximizing between-class variance of the
/// split {<= t} / {> t}; the smallest maximizer wins, so a constant image gives 0.
int otsu_level(const GrayImage& img);

/// dark_is_foreground: fg iff v <= level, else fg iff v > level.
BinaryImage binarize(const GrayImage& img, int level, bool dark_is_foreground = true);

/// Removes connected foreground components with fewer than `min_area` pixels.
BinaryImage despeckle(const BinaryImage& img, int min_area, int connectivity = 8);

/// Renders a mask as ink on paper.
GrayImage to_gray(const BinaryImage& img, std::uint8_t ink = 0, std::uint8_t paper = 255);

}  // namespace fcc
