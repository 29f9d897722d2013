#include "fcc/recognize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "fcc/error.hpp"
#include "fcc/segment.hpp"

namespace fcc {

bool is_valid_label(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw RecognitionError("distance: histograms come from different direction schemes");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += std::abs(a[k] - b[k]);
  return d;
}

RecognitionResult classify(const CodeHistogram& h, const TemplateSet& ts, MatchMode mode) {
  const auto t0 = std::chrono::steady_clock::now();
  if (ts.templates.empty()) throw RecognitionError("classify: empty template set");
  if (h.counts.size() != static_cast<std::size_t>(ts.scheme.connectivity())) {
    throw RecognitionError("classify: histogram scheme does not match template set");
  }

  std::vector<double> query;
  if (mode == MatchMode::Normalized) {
    query = normalize(h);
  } else {
    if (h.total == 0) throw RecognitionError("classify: empty histogram (degenerate glyph)");
    query.assign(h.counts.begin(), h.counts.end());
  }

  // Best distance per label; ties between labels resolve to the smaller label.
  std::vector<std::pair<double, char>> best;
  std::vector<double> reference;
  for (const auto& t : ts.templates) {
    std::span<const double> ref = t.frequencies;
    if (mode == MatchMode::RawTotals) {
      if (!t.mean_total) {
        throw RecognitionError(std::string("classify: template '") + t.label +
                               "' has no code totals; rebuild templates with raw totals");
      }
      reference.resize(t.frequencies.size());
      for (std::size_t k = 0; k < reference.size(); ++k) reference[k] = t.frequencies[k] * *t.mean_total;
      ref = reference;
    }
    const double d = distance(query, ref);
    auto it = std::find_if(best.begin(), best.end(), [&](const auto& e) { return e.second == t.label; });
    if (it == best.end()) best.emplace_back(d, t.label);
    else it->first = std::min(it->first, d);
  }
  std::sort(best.begin(), best.end());

  RecognitionResult result;
  result.label = best[0].second;
  result.distance = best[0].first;
  if (best.size() > 1) result.runner_up = std::make_pair(best[1].second, best[1].first);
  result.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

std::optional<Pixel> glyph_seed(const BinaryImage& glyph) {
  const LabelMap lm = label_components(glyph, 8);
  if (lm.n_components == 0) return std::nullopt;
  const auto stats = component_stats(lm);
  const ComponentStats* largest = &stats.front();
  for (const auto& s : stats) {
    if (s.area > largest->area) largest = &s;
  }
  // Labels follow raster order, so the first pixel carrying the label is the
  // component's topmost-leftmost pixel.
  for (int r = largest->bounds.top; r <= largest->bounds.bottom; ++r) {
    for (int c = largest->bounds.left; c <= largest->bounds.right; ++c) {
      if (lm.at(r, c) == largest->label) return Pixel{r, c};
    }
  }
  return std::nullopt;
}

ChainCode glyph_chain(const BinaryImage& glyph, DirectionScheme scheme) {
  const auto seed = glyph_seed(glyph);
  if (!seed) throw TraceError("glyph has no foreground");
  return trace_boundary(glyph, *seed, scheme);
}

RecognitionResult recognize_glyph(const BinaryImage& glyph, const TemplateSet& ts, MatchMode mode) {
  const auto t0 = std::chrono::steady_clock::now();
  const ChainCode cc = glyph_chain(glyph, ts.scheme);
  RecognitionResult r = classify(code_histogram(cc), ts, mode);
  r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Template build_template(char label, std::span<const BinaryImage> glyphs, DirectionScheme scheme) {
  if (!is_valid_label(label)) throw RecognitionError(std::string("build_template: invalid label '") + label + "'");
  if (glyphs.empty()) throw RecognitionError(std::string("build_template: no glyphs for '") + label + "'");

  Template t;
  t.label = label;
  t.scheme = scheme;
  t.frequencies.assign(static_cast<std::size_t>(scheme.connectivity()), 0.0);
  t.sample_count = glyphs.size();
  double total_sum = 0.0;
  for (std::size_t i = 0; i < glyphs.size(); ++i) {
    CodeHistogram h;
    try {
      h = code_histogram(glyph_chain(glyphs[i], scheme));
      if (h.total == 0) throw TraceError("boundary is a single pixel");
    } catch (const TraceError& e) {
      throw RecognitionError(std::string("build_template: glyph ") + std::to_string(i) + " for '" + label +
                             "' is not traceable: " + e.what());
    }
    const auto f = normalize(h);
    for (std::size_t k = 0; k < f.size(); ++k) t.frequencies[k] += f[k];
    total_sum += static_cast<double>(h.total);
  }
  const auto n = static_cast<double>(glyphs.size());
  for (auto& f : t.frequencies) f /= n;
  t.mean_total = total_sum / n;
  return t;
}

void ConfusionMatrix::add(char truth, char predicted, std::size_t n) { cells_[{truth, predicted}] += n; }

std::size_t ConfusionMatrix::at(char truth, char predicted) const {
  const auto it = cells_.find({truth, predicted});
  return it == cells_.end() ? 0 : it->second;
}

std::size_t ConfusionMatrix::total() const noexcept {
  std::size_t n = 0;
  for (const auto& [key, count] : cells_) n += count;
  return n;
}

std::size_t ConfusionMatrix::correct() const noexcept {
  std::size_t n = 0;
  for (const auto& [key, count] : cells_) {
    if (key.first == key.second) n += count;
  }
  return n;
}

std::size_t ConfusionMatrix::row_total(char truth) const {
  std::size_t n = 0;
  for (const auto& [key, count] : cells_) {
    if (key.first == truth) n += count;
  }
  return n;
}

double ConfusionMatrix::accuracy() const noexcept {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(correct()) / static_cast<double>(n);
}

ConfusionMatrix confusion(std::span<const std::pair<char, RecognitionResult>> results) {
  ConfusionMatrix m;
  for (const auto& [truth, r] : results) m.add(truth, r.label);
  return m;
}

}  // namespace fcc
