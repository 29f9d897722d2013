#include "fcc/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "fcc/error.hpp"
#include "fcc/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace fcc {
namespace {

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool is_image_file(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".pgm" || ext == ".pbm" || ext == ".pnm";
}

std::string label_string(char c) { return std::string(1, c); }

struct PlateOutcome {
  bool projection_ok = false;
  bool ccl_ok = false;
  bool scored = false;
  std::vector<std::pair<char, CharacterResult>> characters;
};

PlateOutcome evaluate_plate(const std::string& path, const std::string& truth, const TemplateSet& ts,
                            const PipelineOptions& opts) {
  const Image img = load_image_file(path);
  const BinaryImage bin = preprocess(img, opts);
  const Segmentation proj = segment(bin, Technique::Projection, opts);
  const Segmentation ccl = segment(bin, Technique::Ccl, opts);

  PlateOutcome out;
  out.projection_ok = proj.boxes.size() == truth.size();
  out.ccl_ok = ccl.boxes.size() == truth.size();
  const Segmentation& chosen = opts.segmenter == Technique::Projection ? proj : ccl;
  if (chosen.boxes.size() != truth.size()) return out;

  out.scored = true;
  auto chars = recognize_boxes(bin, chosen, ts, opts.mode);
  for (std::size_t i = 0; i < chars.size(); ++i) out.characters.emplace_back(truth[i], std::move(chars[i]));
  return out;
}

}  // namespace

std::vector<TruthEntry> parse_truth_csv(std::string_view text) {
  std::vector<TruthEntry> out;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      const auto comma = line.find(',');
      if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos ||
          comma == 0 || comma + 1 == line.size()) {
        throw ParseError("truth csv: expected 'filename,plate_string'", offset);
      }
      out.push_back({std::string(line.substr(0, comma)), std::string(line.substr(comma + 1))});
    }
    offset = end + 1;
  }
  return out;
}

std::vector<TruthEntry> read_truth_csv(const std::string& path) { return parse_truth_csv(read_text(path)); }

void append_truth_csv(const std::string& path, const TruthEntry& entry) {
  if (entry.file.find(',') != std::string::npos || entry.text.find(',') != std::string::npos) {
    throw std::invalid_argument("truth csv: fields may not contain commas");
  }
  std::ofstream f(path, std::ios::binary | std::ios::app);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << entry.file << ',' << entry.text << '\n';
}

std::string corpus_spec_json(const CorpusSpec& spec) {
  ojson j;
  j["count"] = spec.count;
  j["length"] = spec.length;
  j["scales"] = spec.scales;
  j["gap"] = spec.gap;
  j["noise"] = spec.noise;
  j["seed"] = spec.seed;
  j["bold_mix"] = spec.bold_mix;
  return j.dump(2) + "\n";
}

std::optional<CorpusSpec> read_corpus_spec(const std::string& dir) {
  const fs::path p = fs::path(dir) / "corpus.json";
  if (!fs::exists(p)) return std::nullopt;
  const auto j = nlohmann::json::parse(read_text(p.string()));
  CorpusSpec spec;
  spec.count = j.at("count").get<int>();
  spec.length = j.at("length").get<int>();
  spec.scales = j.at("scales").get<std::vector<int>>();
  spec.gap = j.at("gap").get<int>();
  spec.noise = j.at("noise").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.bold_mix = j.at("bold_mix").get<bool>();
  return spec;
}

std::vector<TruthEntry> generate_corpus(const std::string& dir, const CorpusSpec& spec) {
  if (spec.count < 1) throw std::invalid_argument("corpus: count must be >= 1");
  if (spec.length < 1) throw std::invalid_argument("corpus: length must be >= 1");
  if (spec.scales.empty()) throw std::invalid_argument("corpus: need at least one scale");

  fs::create_directories(dir);
  const fs::path truth_path = fs::path(dir) / "truth.csv";
  fs::remove(truth_path);

  std::mt19937_64 rng(spec.seed);
  std::vector<TruthEntry> entries;
  for (int i = 0; i < spec.count; ++i) {
    SynthSpec s;
    s.text = random_text(rng, spec.length);
    s.scale = spec.scales[rng() % spec.scales.size()];
    s.gap = spec.gap;
    s.noise = spec.noise;
    s.bold = spec.bold_mix && (rng() & 1u);
    s.seed = rng();

    char name[32];
    std::snprintf(name, sizeof name, "plate_%04d.pgm", i);
    save_image_file(render_plate(s), NetpbmFormat::P5, (fs::path(dir) / name).string());
    entries.push_back({name, s.text});
    append_truth_csv(truth_path.string(), entries.back());
  }

  std::ofstream f(fs::path(dir) / "corpus.json", std::ios::binary);
  f << corpus_spec_json(spec);
  return entries;
}

bool is_similar_pair(char truth, char predicted) noexcept {
  for (const auto& [a, b] : kSimilarPairs) {
    if ((truth == a && predicted == b) || (truth == b && predicted == a)) return true;
  }
  return false;
}

std::size_t BenchReport::off_diagonal() const { return confusion.total() - confusion.correct(); }

std::size_t BenchReport::off_diagonal_similar() const {
  std::size_t n = 0;
  for (const auto& [key, count] : confusion.cells()) {
    if (key.first != key.second && is_similar_pair(key.first, key.second)) n += count;
  }
  return n;
}

BenchReport run_bench(const std::string& dir, const std::vector<TruthEntry>& truth, const TemplateSet& ts,
                      const BenchOptions& opts) {
  if (truth.empty()) throw std::runtime_error("bench: empty corpus");

  std::set<std::string> known;
  for (const auto& e : truth) known.insert(e.file);
  std::vector<std::string> on_disk;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (de.is_regular_file() && is_image_file(de.path())) on_disk.push_back(de.path().filename().string());
  }
  std::sort(on_disk.begin(), on_disk.end());
  for (const auto& name : on_disk) {
    if (!known.count(name)) throw std::runtime_error("bench: no truth entry for " + name);
  }

  std::vector<PlateOutcome> outcomes(truth.size());
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, opts.jobs));
  auto work = [&](std::size_t first) {
    for (std::size_t i = first; i < truth.size(); i += jobs) {
      outcomes[i] = evaluate_plate((fs::path(dir) / truth[i].file).string(), truth[i].text, ts, opts.pipeline);
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < jobs; ++t) {
      threads.emplace_back([&, t] {
        try {
          work(t);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : threads) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  BenchReport r;
  r.corpus = read_corpus_spec(dir);
  r.connectivity = ts.scheme.connectivity();
  r.options = opts.pipeline;
  r.plates = truth.size();
  bool first_time = true;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& o = outcomes[i];
    r.characters += truth[i].text.size();
    ++r.projection.total;
    ++r.ccl.total;
    r.projection.successful += o.projection_ok ? 1 : 0;
    r.ccl.successful += o.ccl_ok ? 1 : 0;
    if (!o.scored) continue;

    ++r.plates_scored;
    bool exact = true;
    for (const auto& [t, cr] : o.characters) {
      ++r.scored;
      const char predicted = cr.label();
      r.confusion.add(t, predicted);
      if (predicted == t) ++r.correct;
      else exact = false;
      if (!cr.result) continue;

      const double s = cr.result->elapsed;
      auto& tm = r.timing;
      tm.min = first_time ? s : std::min(tm.min, s);
      tm.max = first_time ? s : std::max(tm.max, s);
      first_time = false;
      tm.total += s;
      ++tm.characters;
      auto& lt = tm.by_label[t];
      ++lt.samples;
      lt.seconds += s;
      lt.pixels += cr.pixels;
    }
    r.plates_exact += exact ? 1 : 0;
  }
  return r;
}

std::string report_json(const BenchReport& r, bool include_timing) {
  ojson j;
  j["schema"] = "fccocr-bench/1";
  if (r.corpus) j["corpus"] = ojson::parse(corpus_spec_json(*r.corpus));
  else j["corpus"] = nullptr;
  j["plates"] = r.plates;
  j["characters"] = r.characters;

  ojson cfg;
  cfg["connectivity"] = r.connectivity;
  cfg["segmenter"] = std::string(technique_name(r.options.segmenter));
  cfg["threshold"] = r.options.threshold ? ojson(*r.options.threshold) : ojson("otsu");
  cfg["invert"] = r.options.invert;
  cfg["min_area"] = r.options.min_area;
  cfg["min_height_fraction"] = r.options.min_height_fraction;
  cfg["gap_threshold"] = r.options.gap_threshold;
  cfg["raw_totals"] = r.options.mode == MatchMode::RawTotals;
  j["config"] = cfg;

  auto tally = [](const SegmentationTally& t) {
    ojson o;
    o["successful"] = t.successful;
    o["total"] = t.total;
    o["ratio"] = t.ratio();
    return o;
  };
  j["segmentation"]["projection"] = tally(r.projection);
  j["segmentation"]["ccl"] = tally(r.ccl);

  ojson rec;
  rec["segmenter"] = std::string(technique_name(r.options.segmenter));
  rec["plates_scored"] = r.plates_scored;
  rec["plates_exact"] = r.plates_exact;
  rec["correct"] = r.correct;
  rec["scored"] = r.scored;
  rec["ratio"] = r.recognition_ratio();
  j["recognition"] = rec;

  ojson conf;
  conf["off_diagonal"] = r.off_diagonal();
  conf["off_diagonal_similar_pairs"] = r.off_diagonal_similar();
  ojson cells = ojson::array();
  for (const auto& [key, count] : r.confusion.cells()) {
    cells.push_back({{"truth", label_string(key.first)}, {"predicted", label_string(key.second)}, {"count", count}});
  }
  conf["cells"] = cells;
  j["confusion"] = conf;

  if (include_timing) {
    ojson tm;
    tm["characters"] = r.timing.characters;
    tm["min_s"] = r.timing.min;
    tm["max_s"] = r.timing.max;
    tm["mean_s"] = r.timing.mean();
    ojson labels = ojson::array();
    for (const auto& [label, lt] : r.timing.by_label) {
      labels.push_back({{"label", label_string(label)},
                        {"samples", lt.samples},
                        {"mean_s", lt.seconds / static_cast<double>(lt.samples)},
                        {"mean_pixels", static_cast<double>(lt.pixels) / static_cast<double>(lt.samples)}});
    }
    tm["by_label"] = labels;
    j["timing"] = tm;
  }
  return j.dump(2) + "\n";
}

std::string report_table(const BenchReport& r) {
  std::ostringstream os;
  auto row = [&](const char* phase, const char* technique, std::size_t ok, std::size_t total) {
    const double pct = total == 0 ? 0.0 : 100.0 * static_cast<double>(ok) / static_cast<double>(total);
    os << std::left << std::setw(14) << phase << std::setw(32) << technique << std::right << std::setw(12)
       << (std::to_string(ok) + "/" + std::to_string(total)) << std::setw(11) << std::fixed
       << std::setprecision(2) << pct << "%\n";
  };
  os << std::left << std::setw(14) << "Phase" << std::setw(32) << "Technique" << std::right << std::setw(12)
     << "Successful" << std::setw(12) << "Percentage" << "\n";
  row("Segmentation", "Pixel count", r.projection.successful, r.projection.total);
  row("", "Connected component labeling", r.ccl.successful, r.ccl.total);
  row("Recognition", "FCC", r.correct, r.scored);

  os << "\nrecognition scored on " << r.plates_scored << " plates segmented by "
     << technique_name(r.options.segmenter) << "; " << r.plates_exact << " read exactly\n";
  os << std::setprecision(6) << "per-character time: min " << r.timing.min << " s, mean " << r.timing.mean()
     << " s, max " << r.timing.max << " s over " << r.timing.characters << " characters\n";

  if (r.off_diagonal() != 0) {
    std::vector<std::pair<std::size_t, std::pair<char, char>>> errs;
    for (const auto& [key, count] : r.confusion.cells()) {
      if (key.first != key.second) errs.emplace_back(count, key);
    }
    std::sort(errs.begin(), errs.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    os << "confusions (truth -> predicted):";
    for (std::size_t i = 0; i < std::min<std::size_t>(errs.size(), 10); ++i) {
      os << " " << errs[i].second.first << "->" << errs[i].second.second << " x" << errs[i].first;
    }
    os << "\n" << r.off_diagonal_similar() << " of " << r.off_diagonal()
       << " errors fall in the similar-pattern pairs O/0 B/8 G/6 D/0\n";
  }
  return os.str();
}

}  // namespace fcc
