#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fcc/pipeline.hpp"
#include "fcc/recognize.hpp"

namespace fcc {

/// One line of a truth CSV: `filename,plate_string`.
struct TruthEntry {
  std::string file;
  std::string text;
};

/// Parses `filename,plate_string` lines (no header). Throws ParseError on
/// lines without exactly one comma or with an empty field.
std::vector<TruthEntry> parse_truth_csv(std::string_view text);
std::vector<TruthEntry> read_truth_csv(const std::string& path);
/// Appends one entry, creating the file if needed.
void append_truth_csv(const std::string& path, const TruthEntry& entry);

/// Parameters of a generated corpus; also stored as corpus.json next to the
/// images so the bench can describe what it measured.
struct CorpusSpec {
  int count = 50;
  int length = 7;
  std::vector<int> scales = {3};
  int gap = 4;
  double noise = 0.0;
  std::uint64_t seed = 1;
  bool bold_mix = false;  ///< half the plates (chosen by the RNG) are bold
};

/// Writes plate_NNNN.pgm (P5), truth.csv and corpus.json into `dir`.
/// Deterministic for a fixed spec. Returns the truth entries.
std::vector<TruthEntry> generate_corpus(const std::string& dir, const CorpusSpec& spec);

std::string corpus_spec_json(const CorpusSpec& spec);
std::optional<CorpusSpec> read_corpus_spec(const std::string& dir);

struct SegmentationTally {
  std::size_t successful = 0;
  std::size_t total = 0;
  double ratio() const noexcept { return total == 0 ? 0.0 : static_cast<double>(successful) / total; }
};

struct LabelTiming {
  std::size_t samples = 0;
  double seconds = 0.0;
  std::size_t pixels = 0;
};

struct TimingStats {
  std::size_t characters = 0;
  double min = 0.0;
  double max = 0.0;
  double total = 0.0;
  std::map<char, LabelTiming> by_label;

  double mean() const noexcept { return characters == 0 ? 0.0 : total / static_cast<double>(characters); }
};

/// The similar-pattern pairs plate recognizers are known to mix up.
inline constexpr std::pair<char, char> kSimilarPairs[] = {{'O', '0'}, {'B', '8'}, {'G', '6'}, {'D', '0'}};

/// True when (truth, predicted) is one of kSimilarPairs in either order.
bool is_similar_pair(char truth, char predicted) noexcept;

struct BenchReport {
  std::optional<CorpusSpec> corpus;
  std::size_t plates = 0;
  std::size_t characters = 0;
  int connectivity = 8;
  PipelineOptions options;

  SegmentationTally projection;
  SegmentationTally ccl;

  /// Recognition is scored only on plates the chosen segmenter split into
  /// the expected number of boxes, so `scored` counts those plates' characters.
  std::size_t correct = 0;
  std::size_t scored = 0;
  std::size_t plates_scored = 0;
  std::size_t plates_exact = 0;
  ConfusionMatrix confusion;
  TimingStats timing;

  double recognition_ratio() const noexcept {
    return scored == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(scored);
  }
  std::size_t off_diagonal() const;
  std::size_t off_diagonal_similar() const;
};

struct BenchOptions {
  PipelineOptions pipeline;
  int jobs = 1;
};

/// Runs both segmenters on every corpus image and recognition with the
/// configured one. Throws std::runtime_error if an image in `dir` has no
/// truth entry or the corpus is empty.
BenchReport run_bench(const std::string& dir, const std::vector<TruthEntry>& truth, const TemplateSet& ts,
                      const BenchOptions& opts);

/// Stable-key JSON. All non-timing fields are deterministic; timing lives
/// under the single top-level "timing" key.
std::string report_json(const BenchReport& r, bool include_timing = true);

/// Human-readable table in the segmentation/recognition layout.
std::string report_table(const BenchReport& r);

}  // namespace fcc
