#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fcc/raster.hpp"
#include "fcc/recognize.hpp"
#include "fcc/segment.hpp"

namespace fcc {

/// Knobs for threshold -> despeckle -> segment -> trace -> classify.
struct PipelineOptions {
  std::optional<int> threshold;  ///< fixed level; nullopt = Otsu
  bool invert = false;           ///< light strokes on dark paper
  int min_area = 8;              ///< despeckle and CCL box filter
  double min_height_fraction = 0.3;
  Technique segmenter = Technique::Ccl;
  int gap_threshold = 0;
  MatchMode mode = MatchMode::Normalized;
};

/// Gray input is thresholded (dark strokes are foreground unless inverted);
/// binary input is used as-is. Both are then despeckled.
BinaryImage preprocess(const Image& img, const PipelineOptions& opts);

Segmentation segment(const BinaryImage& bin, Technique technique, const PipelineOptions& opts);

struct CharacterResult {
  Box box;
  std::optional<RecognitionResult> result;
  std::size_t pixels = 0;  ///< foreground pixels in the crop
  std::string error;       ///< set when the glyph could not be traced

  char label() const noexcept { return result ? result->label : '?'; }
};

struct PlateResult {
  Segmentation segmentation;
  std::vector<CharacterResult> characters;

  std::string text() const;
  bool all_traced() const noexcept;
};

/// Recognizes every box of an existing segmentation, left to right.
std::vector<CharacterResult> recognize_boxes(const BinaryImage& bin, const Segmentation& seg,
                                             const TemplateSet& ts, MatchMode mode);

PlateResult recognize_plate(const Image& img, const TemplateSet& ts, const PipelineOptions& opts);

}  // namespace fcc
