#pragma once

#include <string_view>
#include <vector>

#include "fcc/raster.hpp"

namespace fcc {

/// Inclusive pixel rectangle.
struct Box {
  int top = 0;
  int left = 0;
  int bottom = 0;
  int right = 0;

  int width() const noexcept { return right - left + 1; }
  int height() const noexcept { return bottom - top + 1; }

  friend bool operator==(const Box&, const Box&) = default;
};

/// Component ids per pixel: 0 is background, components are 1..n_components
/// numbered in raster order of their first pixel.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<int> labels;
  int n_components = 0;

  int at(int row, int col) const { return labels[static_cast<std::size_t>(row) * width + col]; }
};

/// Per-component area and bounding box, indexed by label - 1.
struct ComponentStats {
  int label = 0;
  std::size_t area = 0;
  Box bounds;
};

enum class Technique { Projection, Ccl };

std::string_view technique_name(Technique t);

struct Segmentation {
  std::vector<Box> boxes;
  Technique technique = Technique::Ccl;
};

/// Foreground count per column.
std::vector<int> column_profile(const BinaryImage& img);

/// Vertical projection ("pixel count") segmentation. Each maximal run of
/// columns whose profile exceeds `gap_threshold` becomes a box spanning the
/// foreground rows found inside that run.
Segmentation segment_by_projection(const BinaryImage& img, int gap_threshold = 0);

/// Two-pass labeling with union-find. `connectivity` is 4 or 8.
LabelMap label_components(const BinaryImage& img, int connectivity = 8);

std::vector<ComponentStats> component_stats(const LabelMap& lm);

/// Keeps components with area >= min_area and height >= min_height_fraction *
/// image height, ordered by left edge then top edge.
Segmentation components_to_boxes(const LabelMap& lm, int min_area = 8,
                                  double min_height_fraction = 0.3);

/// Throws std::out_of_range when the box is not inside the image.
BinaryImage crop(const BinaryImage& img, const Box& box);

}  // namespace fcc
