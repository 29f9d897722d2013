#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "fcc/raster.hpp"

namespace fcc {

/// Characters the embedded font can draw, in label order.
inline constexpr std::string_view kCharset = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;

inline constexpr std::uint8_t kInk = 40;
inline constexpr std::uint8_t kPaper = 215;

struct SynthSpec {
  std::string text;
  int scale = 3;
  int gap = 4;           ///< background columns between glyph cells
  double noise = 0.0;    ///< per-pixel flip probability
  std::uint64_t seed = 0;
  bool bold = false;     ///< 1-pixel dilation of every stroke
};

/// The 5x7 bitmap for `c`. Throws std::invalid_argument outside kCharset.
BinaryImage glyph_bitmap(char c);

/// Glyph at integer scale, optionally bold, with no margin.
BinaryImage render_glyph(char c, int scale = 1, bool bold = false);

/// Noise-free plate mask: margin of 2*scale on every side, glyph cells of
/// 5*scale columns separated by `gap` columns.
BinaryImage render_mask(const SynthSpec& spec);

/// Plate as dark ink on light paper with salt-and-pepper noise applied.
/// Deterministic for a fixed spec.
GrayImage render_plate(const SynthSpec& spec);

/// Flips each pixel between kInk and kPaper with probability `p`.
void add_noise(GrayImage& img, double p, std::uint64_t seed);

/// Uniform in [0,1) from the top 53 bits; avoids the implementation-defined
/// std distributions so corpora are identical across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// `length` characters drawn uniformly from kCharset.
std::string random_text(std::mt19937_64& rng, int length);

}  // namespace fcc
