#include "fcc/raster.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "fcc/segment.hpp"

namespace fcc {

BinaryImage::BinaryImage(int width, int height, std::vector<std::uint8_t> pixels)
    : Raster(width, height, std::move(pixels)) {
  for (auto& v : this->pixels()) v = v ? 1 : 0;
}

std::size_t BinaryImage::count() const noexcept {
  return static_cast<std::size_t>(std::count(pixels().begin(), pixels().end(), std::uint8_t{1}));
}

namespace {

// Between-class variance at a split is proportional to
//   (s0 * N - S * n0)^2 / (n0 * n1)
// where n0, s0 are the count and intensity sum of the low class. Comparing two
// such fractions by cross-multiplication is exact in 128 bits for images up
// to ~3.9e5 pixels; beyond that long double is used.
__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;

struct Score {
  u128 num = 0;  // (s0 N - S n0)^2
  u128 den = 1;  // n0 n1
  long double approx = 0.0L;
};

constexpr std::uint64_t kExactLimit = 390'000;

}  // namespace

int otsu_level(const GrayImage& img) {
  std::array<std::uint64_t, 256> hist{};
  for (auto v : img.pixels()) ++hist[v];

  const auto n = static_cast<std::uint64_t>(img.size());
  std::uint64_t sum = 0;
  for (int i = 0; i < 256; ++i) sum += hist[i] * static_cast<std::uint64_t>(i);
  const bool exact = n <= kExactLimit;

  int best_level = 0;
  Score best;
  bool have_best = false;
  std::uint64_t n0 = 0;
  std::uint64_t s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += hist[t];
    s0 += hist[t] * static_cast<std::uint64_t>(t);
    const std::uint64_t n1 = n - n0;

    Score cur;
    if (n0 != 0 && n1 != 0) {
      const auto diff = static_cast<i128>(s0) * n - static_cast<i128>(sum) * n0;
      const auto mag = static_cast<u128>(diff < 0 ? -diff : diff);
      cur.num = mag * mag;
      cur.den = static_cast<u128>(n0) * n1;
      cur.approx = static_cast<long double>(cur.num) / static_cast<long double>(cur.den);
    }
    // Empty classes score 0, same as num = 0.

    bool better;
    if (!have_best) {
      better = true;
    } else if (exact) {
      better = cur.num * best.den > best.num * cur.den;
    } else {
      better = cur.approx > best.approx;
    }
    if (better) {
      best = cur;
      best_level = t;
      have_best = true;
    }
  }
  return best_level;
}

BinaryImage binarize(const GrayImage& img, int level, bool dark_is_foreground) {
  if (level < 0 || level > 255) throw std::invalid_argument("binarize: level must be in [0,255]");
  BinaryImage out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const bool dark = src[i] <= level;
    dst[i] = (dark == dark_is_foreground) ? 1 : 0;
  }
  return out;
}

BinaryImage despeckle(const BinaryImage& img, int min_area, int connectivity) {
  if (min_area < 1) throw std::invalid_argument("despeckle: min_area must be >= 1");
  if (min_area == 1) return img;

  const LabelMap lm = label_components(img, connectivity);
  std::vector<std::size_t> area(static_cast<std::size_t>(lm.n_components) + 1, 0);
  for (int id : lm.labels) ++area[static_cast<std::size_t>(id)];

  BinaryImage out = img;
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const int id = lm.labels[i];
    if (id != 0 && area[static_cast<std::size_t>(id)] < static_cast<std::size_t>(min_area)) dst[i] = 0;
  }
  return out;
}

GrayImage to_gray(const BinaryImage& img, std::uint8_t ink, std::uint8_t paper) {
  GrayImage out(img.width(), img.height());
  auto src = img.pixels();
  auto dst = out.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? ink : paper;
  return out;
}

}  // namespace fcc
