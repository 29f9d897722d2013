#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fcc/chaincode.hpp"
#include "fcc/raster.hpp"

namespace fcc {

struct Template {
  char label = '?';
  DirectionScheme scheme = DirectionScheme::eight();
  std::vector<double> frequencies;
  std::size_t sample_count = 0;
  /// Mean code count over the samples. Only needed for raw-total matching.
  std::optional<double> mean_total;
};

struct TemplateSet {
  DirectionScheme scheme = DirectionScheme::eight();
  std::vector<Template> templates;
};

enum class MatchMode {
  Normalized,  ///< L1 on code frequencies
  RawTotals,   ///< L1 on raw code totals (templates need mean_total)
};

struct RecognitionResult {
  char label = '?';
  double distance = 0.0;
  std::optional<std::pair<char, double>> runner_up;
  double elapsed = 0.0;  ///< seconds
};

/// L1 distance. Throws RecognitionError if the vectors have different
/// lengths (i.e. come from different direction schemes).
double distance(std::span<const double> a, std::span<const double> b);

/// Nearest template by L1 distance; ties go to the smallest label.
/// runner_up is the best template with a different label, if any.
RecognitionResult classify(const CodeHistogram& h, const TemplateSet& ts,
                           MatchMode mode = MatchMode::Normalized);

/// Largest 8-connected component of the glyph, first in raster order on ties.
/// Returns nullopt for an all-background glyph.
std::optional<Pixel> glyph_seed(const BinaryImage& glyph);

/// Traces the glyph's largest component; throws TraceError when there is
/// nothing traceable.
ChainCode glyph_chain(const BinaryImage& glyph, DirectionScheme scheme);

/// trace + histogram + classify, with `elapsed` covering all three.
RecognitionResult recognize_glyph(const BinaryImage& glyph, const TemplateSet& ts,
                                  MatchMode mode = MatchMode::Normalized);

/// Mean of the glyphs' normalized histograms. Throws RecognitionError naming
/// the index of the first glyph that cannot be traced.
Template build_template(char label, std::span<const BinaryImage> glyphs, DirectionScheme scheme);

/// Valid template labels are A-Z and 0-9.
bool is_valid_label(char c) noexcept;

class ConfusionMatrix {
 public:
  void add(char truth, char predicted, std::size_t n = 1);

  std::size_t at(char truth, char predicted) const;
  std::size_t total() const noexcept;
  std::size_t correct() const noexcept;
  std::size_t row_total(char truth) const;
  /// correct / total; 0 for an empty matrix.
  double accuracy() const noexcept;
  bool empty() const noexcept { return cells_.empty(); }

  const std::map<std::pair<char, char>, std::size_t>& cells() const noexcept { return cells_; }

 private:
  std::map<std::pair<char, char>, std::size_t> cells_;
};

ConfusionMatrix confusion(std::span<const std::pair<char, RecognitionResult>> results);

/// "FCCT1" text template file.
///
///   FCCT1 <connectivity>
///   <label> <sample_count> <f0> ... <f(c-1)> [<mean_total>]
///
/// The trailing mean code total is written only with `with_totals`, and is
/// what raw-total matching needs.
std::string write_templates(const TemplateSet& ts, bool with_totals = false);
/// Throws ParseError on unknown magic, wrong field counts, bad labels, or
/// frequencies that do not sum to 1 within 1e-6.
TemplateSet read_templates(std::string_view text);

TemplateSet load_templates_file(const std::string& path);
void save_templates_file(const TemplateSet& ts, const std::string& path, bool with_totals = false);

}  // namespace fcc
