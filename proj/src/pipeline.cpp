#include "fcc/pipeline.hpp"

#include "fcc/error.hpp"

namespace fcc {

BinaryImage preprocess(const Image& img, const PipelineOptions& opts) {
  BinaryImage bin = std::visit(
      [&](const auto& im) -> BinaryImage {
        using T = std::decay_t<decltype(im)>;
        if constexpr (std::is_same_v<T, GrayImage>) {
          const int level = opts.threshold ? *opts.threshold : otsu_level(im);
          return binarize(im, level, !opts.invert);
        } else {
          return im;
        }
      },
      img);
  return despeckle(bin, std::max(opts.min_area, 1), 8);
}

Segmentation segment(const BinaryImage& bin, Technique technique, const PipelineOptions& opts) {
  if (technique == Technique::Projection) return segment_by_projection(bin, opts.gap_threshold);
  return components_to_boxes(label_components(bin, 8), opts.min_area, opts.min_height_fraction);
}

std::string PlateResult::text() const {
  std::string s;
  for (const auto& c : characters) s += c.label();
  return s;
}

bool PlateResult::all_traced() const noexcept {
  for (const auto& c : characters) {
    if (!c.result) return false;
  }
  return true;
}

std::vector<CharacterResult> recognize_boxes(const BinaryImage& bin, const Segmentation& seg,
                                             const TemplateSet& ts, MatchMode mode) {
  std::vector<CharacterResult> out;
  out.reserve(seg.boxes.size());
  for (const auto& box : seg.boxes) {
    CharacterResult cr;
    cr.box = box;
    const BinaryImage glyph = crop(bin, box);
    cr.pixels = glyph.count();
    try {
      cr.result = recognize_glyph(glyph, ts, mode);
    } catch (const TraceError& e) {
      cr.error = e.what();
    } catch (const RecognitionError& e) {
      // A one-pixel glyph traces to an empty chain; anything else is a
      // template problem the caller must see.
      if (code_histogram(glyph_chain(glyph, ts.scheme)).total != 0) throw;
      cr.error = e.what();
    }
    out.push_back(std::move(cr));
  }
  return out;
}

PlateResult recognize_plate(const Image& img, const TemplateSet& ts, const PipelineOptions& opts) {
  const BinaryImage bin = preprocess(img, opts);
  PlateResult plate;
  plate.segmentation = segment(bin, opts.segmenter, opts);
  plate.characters = recognize_boxes(bin, plate.segmentation, ts, opts.mode);
  return plate;
}

}  // namespace fcc
