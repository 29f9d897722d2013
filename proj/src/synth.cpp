#include "fcc/synth.hpp"

#include <array>
#include <stdexcept>

namespace fcc {
namespace {

// One row per string, '#' = ink. Only outer silhouettes reach the
// classifier, so every glyph needs a distinct one: '0' is 'O' with a square
// top-left corner and '8' is 'B' with rounded left corners.
using Bitmap = std::array<const char*, kGlyphHeight>;

// clang-format off
constexpr std::array<Bitmap, 36> kFont = {{
  // 0
  {"####.",
   "#...#",
   "#...#",
   "#...#",
   "#...#",
   "#...#",
   ".###."},
  // 1
  {"..#..",
   ".##..",
   "..#..",
   "..#..",
   "..#..",
   "..#..",
   ".###."},
  // 2
  {".###.",
   "#...#",
   "....#",
   "...#.",
   "..#..",
   ".#...",
   "#####"},
  // 3
  {"#####",
   "...#.",
   "..#..",
   "...#.",
   "....#",
   "#...#",
   ".###."},
  // 4
  {"...#.",
   "..##.",
   ".#.#.",
   "#..#.",
   "#####",
   "...#.",
   "...#."},
  // 5
  {"#####",
   "#....",
   "####.",
   "....#",
   "....#",
   "#...#",
   ".###."},
  // 6
  {".###.",
   "#...#",
   "#....",
   "####.",
   "#...#",
   "#...#",
   ".###."},
  // 7
  {"#####",
   "....#",
   "...#.",
   "..#..",
   ".#...",
   ".#...",
   ".#..."},
  // 8
  {".###.",
   "#...#",
   "#...#",
   "####.",
   "#...#",
   "#...#",
   ".###."},
  // 9
  {".###.",
   "#...#",
   "#...#",
   ".####",
   "....#",
   "...#.",
   ".##.."},
  // A
  {".###.",
   "#...#",
   "#...#",
   "#####",
   "#...#",
   "#...#",
   "#...#"},
  // B
  {"####.",
   "#...#",
   "#...#",
   "####.",
   "#...#",
   "#...#",
   "####."},
  // C
  {".###.",
   "#...#",
   "#....",
   "#....",
   "#....",
   "#...#",
   ".###."},
  // D
  {"###..",
   "#..#.",
   "#...#",
   "#...#",
   "#...#",
   "#..#.",
   "###.."},
  // E
  {"#####",
   "#....",
   "#....",
   "####.",
   "#....",
   "#....",
   "#####"},
  // F
  {"#####",
   "#....",
   "#....",
   "####.",
   "#....",
   "#....",
   "#...."},
  // G
  {".###.",
   "#...#",
   "#....",
   "#.###",
   "#...#",
   "#...#",
   ".####"},
  // H
  {"#...#",
   "#...#",
   "#...#",
   "#####",
   "#...#",
   "#...#",
   "#...#"},
  // I
  {"..#..",
   "..#..",
   "..#..",
   "..#..",
   "..#..",
   "..#..",
   "..#.."},
  // J
  {"..###",
   "...#.",
   "...#.",
   "...#.",
   "...#.",
   "#..#.",
   ".##.."},
  // K
  {"#...#",
   "#..#.",
   "#.#..",
   "##...",
   "#.#..",
   "#..#.",
   "#...#"},
  // L
  {"#....",
   "#....",
   "#....",
   "#....",
   "#....",
   "#....",
   "#####"},
  // M
  {"#...#",
   "##.##",
   "#.#.#",
   "#.#.#",
   "#...#",
   "#...#",
   "#...#"},
  // N
  {"#...#",
   "#...#",
   "##..#",
   "#.#.#",
   "#..##",
   "#...#",
   "#...#"},
  // O
  {".###.",
   "#...#",
   "#...#",
   "#...#",
   "#...#",
   "#...#",
   ".###."},
  // P
  {"####.",
   "#...#",
   "#...#",
   "####.",
   "#....",
   "#....",
   "#...."},
  // Q
  {".###.",
   "#...#",
   "#...#",
   "#...#",
   "#.#.#",
   "#..#.",
   ".##.#"},
  // R
  {"####.",
   "#...#",
   "#...#",
   "####.",
   "#.#..",
   "#..#.",
   "#...#"},
  // S
  {".####",
   "#....",
   "#....",
   ".###.",
   "....#",
   "....#",
   "####."},
  // T
  {"#####",
   "..#..",
   "..#..",
   "..#..",
   "..#..",
   "..#..",
   "..#.."},
  // U
  {"#...#",
   "#...#",
   "#...#",
   "#...#",
   "#...#",
   "#...#",
   "#####"},
  // V
  {"#...#",
   "#...#",
   "#...#",
   "#...#",
   "#...#",
   ".#.#.",
   "..#.."},
  // W
  {"#...#",
   "#...#",
   "#...#",
   "#.#.#",
   "#.#.#",
   "#.#.#",
   ".#.#."},
  // X
  {"#...#",
   "#...#",
   ".#.#.",
   "..#..",
   ".#.#.",
   "#...#",
   "#...#"},
  // Y
  {"#...#",
   "#...#",
   ".#.#.",
   "..#..",
   "..#..",
   "..#..",
   "..#.."},
  // Z
  {"#####",
   "....#",
   "...#.",
   "..#..",
   ".#...",
   "#....",
   "#####"},
}};
// clang-format on

const Bitmap& bitmap_for(char c) {
  const auto pos = kCharset.find(c);
  if (c == '\0' || pos == std::string_view::npos) {
    throw std::invalid_argument(std::string("no glyph for character '") + c + "'");
  }
  return kFont[pos];
}

BinaryImage dilate(const BinaryImage& img) {
  BinaryImage out(img.width() + 2, img.height() + 2);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (!img.at(r, c)) continue;
      for (int dr = 0; dr <= 2; ++dr) {
        for (int dc = 0; dc <= 2; ++dc) out.set(r + dr, c + dc, true);
      }
    }
  }
  return out;
}

}  // namespace

BinaryImage glyph_bitmap(char c) {
  const Bitmap& rows = bitmap_for(c);
  BinaryImage out(kGlyphWidth, kGlyphHeight);
  for (int r = 0; r < kGlyphHeight; ++r) {
    for (int col = 0; col < kGlyphWidth; ++col) out.set(r, col, rows[r][col] == '#');
  }
  return out;
}

BinaryImage render_glyph(char c, int scale, bool bold) {
  if (scale < 1) throw std::invalid_argument("render_glyph: scale must be >= 1");
  const BinaryImage base = glyph_bitmap(c);
  BinaryImage out(kGlyphWidth * scale, kGlyphHeight * scale);
  for (int r = 0; r < out.height(); ++r) {
    for (int col = 0; col < out.width(); ++col) out.set(r, col, base.at(r / scale, col / scale));
  }
  return bold ? dilate(out) : out;
}

BinaryImage render_mask(const SynthSpec& spec) {
  if (spec.text.empty()) throw std::invalid_argument("synth: empty text");
  if (spec.scale < 1) throw std::invalid_argument("synth: scale must be >= 1");
  if (spec.gap < 2) throw std::invalid_argument("synth: gap must be >= 2 columns");
  if (spec.bold && spec.gap < 3) throw std::invalid_argument("synth: bold glyphs need a gap of >= 3 columns");

  const int margin = 2 * spec.scale;
  const int cell_w = kGlyphWidth * spec.scale;
  const int n = static_cast<int>(spec.text.size());
  BinaryImage out(2 * margin + n * cell_w + (n - 1) * spec.gap, 2 * margin + kGlyphHeight * spec.scale);

  const int shift = spec.bold ? 1 : 0;  // dilation grows the glyph by one pixel on each side
  for (int i = 0; i < n; ++i) {
    const BinaryImage g = render_glyph(spec.text[static_cast<std::size_t>(i)], spec.scale, spec.bold);
    const int top = margin - shift;
    const int left = margin + i * (cell_w + spec.gap) - shift;
    for (int r = 0; r < g.height(); ++r) {
      for (int c = 0; c < g.width(); ++c) {
        if (g.at(r, c)) out.set(top + r, left + c, true);
      }
    }
  }
  return out;
}

void add_noise(GrayImage& img, double p, std::uint64_t seed) {
  if (p < 0.0 || p >= 1.0) throw std::invalid_argument("synth: noise must be in [0,1)");
  if (p == 0.0) return;
  std::mt19937_64 rng(seed);
  for (auto& v : img.pixels()) {
    if (unit_uniform(rng) < p) v = v < 128 ? kPaper : kInk;
  }
}

GrayImage render_plate(const SynthSpec& spec) {
  GrayImage img = to_gray(render_mask(spec), kInk, kPaper);
  add_noise(img, spec.noise, spec.seed);
  return img;
}

std::string random_text(std::mt19937_64& rng, int length) {
  std::string s;
  for (int i = 0; i < length; ++i) s += kCharset[rng() % kCharset.size()];
  return s;
}

}  // namespace fcc
