// fccocr: chain-code plate recognizer front end.
//
// Exit codes: 0 success, 1 usage, 2 I/O or parse error, 3 segmentation
// failure, 4 recognition precondition failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "fcc/bench.hpp"
#include "fcc/chaincode.hpp"
#include "fcc/error.hpp"
#include "fcc/pipeline.hpp"
#include "fcc/recognize.hpp"
#include "fcc/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kIo = 2, kSegmentation = 3, kRecognition = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SegmentationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags shared by every command that runs the preprocessing pipeline.
struct PipelineFlags {
  std::string threshold = "otsu";
  bool invert = false;
  int min_area = 8;
  std::string segmenter = "ccl";
  int gap_threshold = 0;
  bool raw_totals = false;

  void add_to(CLI::App* cmd, bool with_segmenter) {
    cmd->add_option("--threshold", threshold, "'otsu' or a fixed level 0-255")->capture_default_str();
    cmd->add_flag("--invert", invert, "treat light strokes on dark paper as foreground");
    cmd->add_option("--min-area", min_area, "drop components smaller than this")->capture_default_str();
    if (with_segmenter) {
      cmd->add_option("--segmenter", segmenter, "projection | ccl")
          ->check(CLI::IsMember({"projection", "ccl"}))
          ->capture_default_str();
      cmd->add_option("--gap-threshold", gap_threshold, "projection: columns with at most this many pixels split")
          ->capture_default_str();
      cmd->add_flag("--raw-totals", raw_totals, "match raw code totals instead of frequencies");
    }
  }

  fcc::PipelineOptions options() const {
    fcc::PipelineOptions o;
    if (threshold != "otsu") {
      int level = -1;
      try {
        std::size_t used = 0;
        level = std::stoi(threshold, &used);
        if (used != threshold.size()) level = -1;
      } catch (const std::exception&) {
        level = -1;
      }
      if (level < 0 || level > 255) throw UsageError("--threshold must be 'otsu' or 0-255");
      o.threshold = level;
    }
    if (min_area < 1) throw UsageError("--min-area must be >= 1");
    if (gap_threshold < 0) throw UsageError("--gap-threshold must be >= 0");
    o.invert = invert;
    o.min_area = min_area;
    o.segmenter = segmenter == "projection" ? fcc::Technique::Projection : fcc::Technique::Ccl;
    o.gap_threshold = gap_threshold;
    o.mode = raw_totals ? fcc::MatchMode::RawTotals : fcc::MatchMode::Normalized;
    return o;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

fcc::TemplateSet load_checked_templates(const std::string& path, int connectivity) {
  fcc::TemplateSet ts = fcc::load_templates_file(path);
  if (connectivity != 0 && connectivity != ts.scheme.connectivity()) {
    throw fcc::RecognitionError("templates in " + path + " use the " + std::to_string(ts.scheme.connectivity()) +
                                "-direction scheme, not " + std::to_string(connectivity));
  }
  if (ts.templates.empty()) throw fcc::RecognitionError("template file " + path + " has no templates");
  return ts;
}

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string text;
  int scale = 3;
  std::vector<int> scales;
  int gap = 4;
  double noise = 0.0;
  std::uint64_t seed = 1;
  bool bold = false;
  bool bold_mix = false;
  int count = 0;
  int length = 7;
  std::string out;
  std::string truth;
};

int run_synth(const SynthArgs& a) {
  if (a.out.empty()) throw UsageError("synth needs --out");
  if (a.count > 0) {
    if (!a.text.empty()) throw UsageError("use either --text or --count");
    fcc::CorpusSpec spec;
    spec.count = a.count;
    spec.length = a.length;
    spec.scales = a.scales.empty() ? std::vector<int>{a.scale} : a.scales;
    spec.gap = a.gap;
    spec.noise = a.noise;
    spec.seed = a.seed;
    spec.bold_mix = a.bold_mix;
    const auto entries = fcc::generate_corpus(a.out, spec);
    std::cout << "wrote " << entries.size() << " plates to " << a.out << "\n";
    return kOk;
  }

  if (a.text.empty()) throw UsageError("synth needs --text or --count");
  for (char c : a.text) {
    if (fcc::kCharset.find(c) == std::string_view::npos) {
      throw fcc::RecognitionError(std::string("character '") + c + "' is not in the embedded font (A-Z, 0-9)");
    }
  }
  fcc::SynthSpec spec{a.text, a.scale, a.gap, a.noise, a.seed, a.bold};
  fcc::save_image_file(fcc::render_plate(spec), fcc::NetpbmFormat::P5, a.out);
  if (!a.truth.empty()) fcc::append_truth_csv(a.truth, {fs::path(a.out).filename().string(), a.text});
  return kOk;
}

// ---- build-templates -------------------------------------------------------

struct BuildArgs {
  std::vector<std::string> glyphs;  // LABEL=PATH
  std::string glyph_dir;
  int font_scale = 0;
  bool font_bold = false;
  int connectivity = 8;
  bool raw_totals = false;
  std::string out;
  PipelineFlags flags;
};

int run_build(const BuildArgs& a) {
  if (a.out.empty()) throw UsageError("build-templates needs --out");
  const auto scheme = fcc::DirectionScheme::from_connectivity(a.connectivity);
  const auto opts = a.flags.options();

  std::map<char, std::vector<fcc::BinaryImage>> by_label;
  auto add_file = [&](char label, const std::string& path) {
    if (!fcc::is_valid_label(label)) throw UsageError(std::string("invalid label '") + label + "' for " + path);
    if (!fs::exists(path)) throw std::runtime_error("no such file: " + path);
    by_label[label].push_back(fcc::preprocess(fcc::load_image_file(path), opts));
  };

  for (const auto& spec : a.glyphs) {
    const auto eq = spec.find('=');
    if (eq != 1) throw UsageError("glyph arguments look like LABEL=PATH, got '" + spec + "'");
    add_file(spec[0], spec.substr(2));
  }
  if (!a.glyph_dir.empty()) {
    if (!fs::is_directory(a.glyph_dir)) throw std::runtime_error("no such directory: " + a.glyph_dir);
    std::vector<fs::path> files;
    for (const auto& de : fs::directory_iterator(a.glyph_dir)) {
      const auto ext = de.path().extension().string();
      if (de.is_regular_file() && (ext == ".pgm" || ext == ".pbm" || ext == ".pnm")) files.push_back(de.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) add_file(p.filename().string()[0], p.string());
  }
  if (a.font_scale > 0) {
    for (char c : fcc::kCharset) by_label[c].push_back(fcc::render_glyph(c, a.font_scale, a.font_bold));
  }
  if (by_label.empty()) throw UsageError("no glyphs given (LABEL=PATH, --glyph-dir or --font-scale)");

  fcc::TemplateSet ts{scheme, {}};
  for (const auto& [label, glyphs] : by_label) ts.templates.push_back(fcc::build_template(label, glyphs, scheme));
  fcc::save_templates_file(ts, a.out, a.raw_totals);
  std::cout << "wrote " << ts.templates.size() << " templates to " << a.out << "\n";
  return kOk;
}

// ---- recognize ---------------------------------------------------------------

struct RecognizeArgs {
  std::string image;
  std::string templates;
  int connectivity = 0;
  bool json = false;
  PipelineFlags flags;
};

int run_recognize(const RecognizeArgs& a) {
  const auto opts = a.flags.options();
  const fcc::Image img = fcc::load_image_file(a.image);
  const fcc::TemplateSet ts = load_checked_templates(a.templates, a.connectivity);
  const fcc::PlateResult plate = fcc::recognize_plate(img, ts, opts);
  if (plate.segmentation.boxes.empty()) throw SegmentationFailure("no characters found in " + a.image);

  if (a.json) {
    nlohmann::ordered_json j;
    j["text"] = plate.text();
    j["segmenter"] = std::string(fcc::technique_name(plate.segmentation.technique));
    auto chars = nlohmann::ordered_json::array();
    for (const auto& c : plate.characters) {
      nlohmann::ordered_json e;
      e["label"] = std::string(1, c.label());
      e["box"] = {c.box.top, c.box.left, c.box.bottom, c.box.right};
      e["pixels"] = c.pixels;
      if (c.result) {
        e["distance"] = c.result->distance;
        if (c.result->runner_up) {
          e["runner_up"] = {{"label", std::string(1, c.result->runner_up->first)},
                            {"distance", c.result->runner_up->second}};
        }
        e["elapsed_s"] = c.result->elapsed;
      } else {
        e["error"] = c.error;
      }
      chars.push_back(e);
    }
    j["characters"] = chars;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << plate.text() << "\n";
    for (std::size_t i = 0; i < plate.characters.size(); ++i) {
      const auto& c = plate.characters[i];
      std::printf("%zu %c ", i, c.label());
      if (c.result) {
        std::printf("distance %.6f", c.result->distance);
        if (c.result->runner_up) std::printf(" runner-up %c %.6f", c.result->runner_up->first, c.result->runner_up->second);
        std::printf(" elapsed %.6fs\n", c.result->elapsed);
      } else {
        std::printf("untraceable: %s\n", c.error.c_str());
      }
    }
  }
  if (!plate.all_traced()) return kRecognition;
  return kOk;
}

// ---- bench -------------------------------------------------------------------

struct BenchArgs {
  std::string dir;
  std::string truth;
  std::string templates;
  int connectivity = 0;
  int jobs = 1;
  bool json = false;
  std::string out;
  PipelineFlags flags;
};

int run_bench(const BenchArgs& a) {
  fcc::BenchOptions opts;
  opts.pipeline = a.flags.options();
  opts.jobs = a.jobs;
  const auto truth = fcc::read_truth_csv(a.truth.empty() ? (fs::path(a.dir) / "truth.csv").string() : a.truth);
  const fcc::TemplateSet ts = load_checked_templates(a.templates, a.connectivity);
  const fcc::BenchReport report = fcc::run_bench(a.dir, truth, ts, opts);

  const std::string json = fcc::report_json(report);
  if (!a.out.empty()) write_text(a.out, json);
  std::cout << (a.json ? json : fcc::report_table(report));
  return kOk;
}

// ---- trace -------------------------------------------------------------------

struct TraceArgs {
  std::string image;
  int connectivity = 8;
  std::vector<int> at;
  PipelineFlags flags;
};

int run_trace(TraceArgs a) {
  const auto scheme = fcc::DirectionScheme::from_connectivity(a.connectivity);
  auto opts = a.flags.options();
  const fcc::BinaryImage bin = fcc::preprocess(fcc::load_image_file(a.image), opts);

  fcc::ChainCode cc;
  if (a.at.empty()) {
    cc = fcc::glyph_chain(bin, scheme);
  } else {
    if (a.at.size() != 2) throw UsageError("--at takes ROW,COL");
    cc = fcc::trace_boundary(bin, fcc::Pixel{a.at[0], a.at[1]}, scheme);
  }
  const auto h = fcc::code_histogram(cc);
  std::cout << cc.start.row << "," << cc.start.col << "\n" << cc.to_string() << "\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) std::cout << (k ? " " : "") << h.counts[k];
  std::cout << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Freeman chain-code character recognition for single-line plates"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "render a synthetic plate, or a whole corpus with --count");
  synth_cmd->add_option("--text", synth.text, "plate text (A-Z, 0-9)");
  synth_cmd->add_option("--scale", synth.scale, "integer glyph scale")->capture_default_str();
  synth_cmd->add_option("--scales", synth.scales, "corpus: scales to draw from")->delimiter(',');
  synth_cmd->add_option("--gap", synth.gap, "columns between glyphs")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "salt-and-pepper flip probability")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "RNG seed")->capture_default_str();
  synth_cmd->add_flag("--bold", synth.bold, "dilate strokes by one pixel");
  synth_cmd->add_flag("--bold-mix", synth.bold_mix, "corpus: make about half the plates bold");
  synth_cmd->add_option("--count", synth.count, "corpus: number of plates");
  synth_cmd->add_option("--length", synth.length, "corpus: characters per plate")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "output image (or corpus directory with --count)");
  synth_cmd->add_option("--truth", synth.truth, "append 'filename,text' to this CSV");

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build-templates", "build an FCCT1 template file from labelled glyphs");
  build_cmd->add_option("glyphs", build.glyphs, "LABEL=PATH glyph images");
  build_cmd->add_option("--glyph-dir", build.glyph_dir, "directory of glyph images labelled by first character");
  build_cmd->add_option("--font-scale", build.font_scale, "add the embedded font's 36 glyphs at this scale");
  build_cmd->add_flag("--font-bold", build.font_bold, "with --font-scale: use bold glyphs");
  build_cmd->add_option("--connectivity", build.connectivity, "direction scheme, 4 or 8")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  build_cmd->add_flag("--raw-totals", build.raw_totals, "also store mean code totals (needed by --raw-totals)");
  build_cmd->add_option("--out", build.out, "template file to write");
  build.flags.add_to(build_cmd, false);

  RecognizeArgs rec;
  auto* rec_cmd = app.add_subcommand("recognize", "read the characters of one plate image");
  rec_cmd->add_option("image", rec.image, "Netpbm image")->required();
  rec_cmd->add_option("--templates", rec.templates, "FCCT1 template file")->required();
  rec_cmd->add_option("--connectivity", rec.connectivity, "require templates of this scheme");
  rec_cmd->add_flag("--json", rec.json, "print JSON");
  rec.flags.add_to(rec_cmd, true);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "segmentation/recognition accuracy and timing over a corpus");
  bench_cmd->add_option("corpus", bench.dir, "corpus directory")->required();
  bench_cmd->add_option("--truth", bench.truth, "truth CSV (default: <corpus>/truth.csv)");
  bench_cmd->add_option("--templates", bench.templates, "FCCT1 template file")->required();
  bench_cmd->add_option("--connectivity", bench.connectivity, "require templates of this scheme");
  bench_cmd->add_option("--jobs", bench.jobs, "worker threads")->capture_default_str();
  bench_cmd->add_flag("--json", bench.json, "print the JSON report instead of the table");
  bench_cmd->add_option("--out", bench.out, "also write the JSON report here");
  bench.flags.add_to(bench_cmd, true);

  TraceArgs trace;
  auto* trace_cmd = app.add_subcommand("trace", "print the chain code of the largest component");
  trace_cmd->add_option("image", trace.image, "Netpbm image")->required();
  trace_cmd->add_option("--connectivity", trace.connectivity, "direction scheme, 4 or 8")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  trace_cmd->add_option("--at", trace.at, "seed pixel ROW,COL")->delimiter(',');
  trace.flags.min_area = 1;
  trace.flags.add_to(trace_cmd, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*synth_cmd) return run_synth(synth);
    if (*build_cmd) return run_build(build);
    if (*rec_cmd) return run_recognize(rec);
    if (*bench_cmd) return run_bench(bench);
    if (*trace_cmd) return run_trace(trace);
  } catch (const UsageError& e) {
    std::cerr << "fccocr: " << e.what() << "\n";
    return kUsage;
  } catch (const SegmentationFailure& e) {
    std::cerr << "fccocr: segmentation failed: " << e.what() << "\n";
    return kSegmentation;
  } catch (const fcc::RecognitionError& e) {
    std::cerr << "fccocr: " << e.what() << "\n";
    return kRecognition;
  } catch (const fcc::TraceError& e) {
    std::cerr << "fccocr: " << e.what() << "\n";
    return kRecognition;
  } catch (const fcc::ParseError& e) {
    std::cerr << "fccocr: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fccocr: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "fccocr: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}
