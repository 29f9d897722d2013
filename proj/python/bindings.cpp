#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "fcc/bench.hpp"
#include "fcc/chaincode.hpp"
#include "fcc/error.hpp"
#include "fcc/pipeline.hpp"
#include "fcc/recognize.hpp"
#include "fcc/segment.hpp"
#include "fcc/synth.hpp"

namespace py = pybind11;
using namespace fcc;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

template <typename Img>
Img from_numpy(const U8Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  const auto h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
  std::vector<std::uint8_t> px(a.data(), a.data() + a.size());
  return Img(w, h, std::move(px));
}

BinaryImage to_mask(const U8Array& a) { return from_numpy<BinaryImage>(a); }

py::array gray_to_numpy(const GrayImage& img) {
  U8Array out({img.height(), img.width()});
  std::memcpy(out.mutable_data(), img.pixels().data(), img.size());
  return out;
}

py::array mask_to_numpy(const BinaryImage& img) {
  py::array_t<bool> out({img.height(), img.width()});
  auto* dst = out.mutable_data();
  const auto src = img.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] != 0;
  return out;
}

py::array image_to_numpy(const Image& img) {
  return std::visit(
      [](const auto& im) -> py::array {
        if constexpr (std::is_same_v<std::decay_t<decltype(im)>, GrayImage>) return gray_to_numpy(im);
        else return mask_to_numpy(im);
      },
      img);
}

// bool arrays are masks, anything else is gray.
Image image_from_numpy(const py::array& a) {
  if (a.dtype().is(py::dtype::of<bool>())) return to_mask(a.cast<U8Array>());
  return from_numpy<GrayImage>(a.cast<U8Array>());
}

NetpbmFormat parse_format(const std::string& s) {
  if (s == "P1") return NetpbmFormat::P1;
  if (s == "P2") return NetpbmFormat::P2;
  if (s == "P4") return NetpbmFormat::P4;
  if (s == "P5") return NetpbmFormat::P5;
  throw py::value_error("format must be one of P1, P2, P4, P5");
}

Technique parse_technique(const std::string& s) {
  if (s == "ccl") return Technique::Ccl;
  if (s == "projection") return Technique::Projection;
  throw py::value_error("segmenter must be 'ccl' or 'projection'");
}

PipelineOptions make_options(std::optional<int> threshold, bool invert, int min_area, const std::string& segmenter,
                             int gap_threshold, bool raw_totals) {
  PipelineOptions o;
  o.threshold = threshold;
  o.invert = invert;
  o.min_area = min_area;
  o.segmenter = parse_technique(segmenter);
  o.gap_threshold = gap_threshold;
  o.mode = raw_totals ? MatchMode::RawTotals : MatchMode::Normalized;
  return o;
}

py::tuple box_tuple(const Box& b) { return py::make_tuple(b.top, b.left, b.bottom, b.right); }

py::dict result_dict(const RecognitionResult& r) {
  py::dict d;
  d["label"] = std::string(1, r.label);
  d["distance"] = r.distance;
  if (r.runner_up) d["runner_up"] = py::make_tuple(std::string(1, r.runner_up->first), r.runner_up->second);
  else d["runner_up"] = py::none();
  d["elapsed"] = r.elapsed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Freeman chain-code plate recognition (C++ core)";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<TraceError>(m, "TraceError", PyExc_RuntimeError);
  py::register_exception<RecognitionError>(m, "RecognitionError", PyExc_RuntimeError);

  m.attr("CHARSET") = std::string(kCharset);

  // raster
  m.def("load_image", [](const std::string& path) { return image_to_numpy(load_image_file(path)); }, py::arg("path"),
        "Reads a Netpbm file; P1/P4 give a bool mask, P2/P5 a uint8 image.");
  m.def(
      "save_image",
      [](const py::array& img, const std::string& path, const std::string& format) {
        save_image_file(image_from_numpy(img), parse_format(format), path);
      },
      py::arg("image"), py::arg("path"), py::arg("format"));
  m.def("otsu_level", [](const U8Array& g) { return otsu_level(from_numpy<GrayImage>(g)); }, py::arg("gray"));
  m.def(
      "binarize",
      [](const U8Array& g, int level, bool dark) { return mask_to_numpy(binarize(from_numpy<GrayImage>(g), level, dark)); },
      py::arg("gray"), py::arg("level"), py::arg("dark_is_foreground") = true);
  m.def(
      "despeckle",
      [](const U8Array& mask, int min_area, int conn) { return mask_to_numpy(despeckle(to_mask(mask), min_area, conn)); },
      py::arg("mask"), py::arg("min_area"), py::arg("connectivity") = 8);

  // segment
  m.def(
      "label_components",
      [](const U8Array& mask, int conn) {
        const LabelMap lm = label_components(to_mask(mask), conn);
        py::array_t<int> out({lm.height, lm.width});
        std::memcpy(out.mutable_data(), lm.labels.data(), lm.labels.size() * sizeof(int));
        return py::make_tuple(out, lm.n_components);
      },
      py::arg("mask"), py::arg("connectivity") = 8, "Returns (labels, n_components).");
  m.def(
      "segment",
      [](const U8Array& mask, const std::string& technique, int min_area, double min_height_fraction, int gap) {
        PipelineOptions o;
        o.min_area = min_area;
        o.min_height_fraction = min_height_fraction;
        o.gap_threshold = gap;
        py::list boxes;
        for (const auto& b : segment(to_mask(mask), parse_technique(technique), o).boxes) boxes.append(box_tuple(b));
        return boxes;
      },
      py::arg("mask"), py::arg("technique") = "ccl", py::arg("min_area") = 8, py::arg("min_height_fraction") = 0.3,
      py::arg("gap_threshold") = 0, "Character boxes as (top, left, bottom, right), left to right.");

  // chaincode
  m.def(
      "trace_boundary",
      [](const U8Array& mask, std::optional<std::pair<int, int>> seed, int conn) {
        const BinaryImage img = to_mask(mask);
        const auto scheme = DirectionScheme::from_connectivity(conn);
        const ChainCode cc =
            seed ? trace_boundary(img, Pixel{seed->first, seed->second}, scheme) : glyph_chain(img, scheme);
        return py::make_tuple(py::make_tuple(cc.start.row, cc.start.col),
                              std::vector<int>(cc.codes.begin(), cc.codes.end()));
      },
      py::arg("mask"), py::arg("seed") = py::none(), py::arg("connectivity") = 8,
      "Returns (start, codes). Without a seed the largest component is traced.");
  m.def(
      "decode",
      [](std::pair<int, int> start, const std::vector<int>& codes, int conn) {
        ChainCode cc{{start.first, start.second}, DirectionScheme::from_connectivity(conn), {}};
        for (int c : codes) {
          if (c < 0 || c >= conn) throw py::value_error("code out of range for the scheme");
          cc.codes.push_back(static_cast<std::uint8_t>(c));
        }
        std::vector<std::pair<int, int>> out;
        for (const Pixel p : decode(cc)) out.emplace_back(p.row, p.col);
        return out;
      },
      py::arg("start"), py::arg("codes"), py::arg("connectivity") = 8);
  m.def(
      "code_histogram",
      [](const std::vector<int>& codes, int conn) {
        std::vector<std::size_t> counts(static_cast<std::size_t>(DirectionScheme::from_connectivity(conn).connectivity()));
        for (int c : codes) {
          if (c < 0 || c >= conn) throw py::value_error("code out of range for the scheme");
          ++counts[static_cast<std::size_t>(c)];
        }
        return counts;
      },
      py::arg("codes"), py::arg("connectivity") = 8);

  // recognize
  py::class_<TemplateSet>(m, "TemplateSet")
      .def_static("load", &load_templates_file, py::arg("path"))
      .def_static(
          "from_font",
          [](int scale, int conn, bool bold) {
            const auto scheme = DirectionScheme::from_connectivity(conn);
            TemplateSet ts{scheme, {}};
            for (char c : kCharset) {
              ts.templates.push_back(build_template(c, std::vector<BinaryImage>{render_glyph(c, scale, bold)}, scheme));
            }
            return ts;
          },
          py::arg("scale") = 3, py::arg("connectivity") = 8, py::arg("bold") = false)
      .def_static(
          "from_glyphs",
          [](const std::map<std::string, std::vector<U8Array>>& glyphs, int conn) {
            const auto scheme = DirectionScheme::from_connectivity(conn);
            TemplateSet ts{scheme, {}};
            for (const auto& [label, arrays] : glyphs) {
              if (label.size() != 1 || !is_valid_label(label[0])) throw py::value_error("labels are single A-Z/0-9 characters");
              std::vector<BinaryImage> imgs;
              for (const auto& a : arrays) imgs.push_back(to_mask(a));
              ts.templates.push_back(build_template(label[0], imgs, scheme));
            }
            return ts;
          },
          py::arg("glyphs"), py::arg("connectivity") = 8, "Builds one template per label from binary glyph masks.")
      .def("save", &save_templates_file, py::arg("path"), py::arg("with_totals") = false)
      .def("dumps", &write_templates, py::arg("with_totals") = false)
      .def_property_readonly("connectivity", [](const TemplateSet& ts) { return ts.scheme.connectivity(); })
      .def_property_readonly("labels",
                             [](const TemplateSet& ts) {
                               std::string s;
                               for (const auto& t : ts.templates) s += t.label;
                               return s;
                             })
      .def("__len__", [](const TemplateSet& ts) { return ts.templates.size(); })
      .def(
          "classify",
          [](const TemplateSet& ts, const U8Array& glyph, bool raw_totals) {
            return result_dict(
                recognize_glyph(to_mask(glyph), ts, raw_totals ? MatchMode::RawTotals : MatchMode::Normalized));
          },
          py::arg("glyph"), py::arg("raw_totals") = false, "Traces the glyph mask and returns the best match.");

  m.def(
      "distance",
      [](const std::vector<double>& a, const std::vector<double>& b) { return distance(a, b); }, py::arg("a"),
      py::arg("b"));

  m.def(
      "recognize_plate",
      [](const py::array& image, const TemplateSet& ts, std::optional<int> threshold, bool invert, int min_area,
         const std::string& segmenter, int gap, bool raw_totals) {
        const PlateResult p = recognize_plate(image_from_numpy(image), ts,
                                              make_options(threshold, invert, min_area, segmenter, gap, raw_totals));
        py::list chars;
        for (const auto& c : p.characters) {
          py::dict d = c.result ? result_dict(*c.result) : py::dict();
          if (!c.result) {
            d["label"] = "?";
            d["error"] = c.error;
          }
          d["box"] = box_tuple(c.box);
          d["pixels"] = c.pixels;
          chars.append(d);
        }
        return py::make_tuple(p.text(), chars);
      },
      py::arg("image"), py::arg("templates"), py::arg("threshold") = py::none(), py::arg("invert") = false,
      py::arg("min_area") = 8, py::arg("segmenter") = "ccl", py::arg("gap_threshold") = 0,
      py::arg("raw_totals") = false, "Returns (text, per-character dicts).");

  // synth / bench
  m.def(
      "render_plate",
      [](const std::string& text, int scale, int gap, double noise, std::uint64_t seed, bool bold) {
        return gray_to_numpy(render_plate({text, scale, gap, noise, seed, bold}));
      },
      py::arg("text"), py::arg("scale") = 3, py::arg("gap") = 4, py::arg("noise") = 0.0, py::arg("seed") = 0,
      py::arg("bold") = false);
  m.def("render_glyph", [](char c, int scale, bool bold) { return mask_to_numpy(render_glyph(c, scale, bold)); },
        py::arg("char"), py::arg("scale") = 1, py::arg("bold") = false);
  m.def(
      "generate_corpus",
      [](const std::string& dir, int count, int length, std::vector<int> scales, int gap, double noise,
         std::uint64_t seed, bool bold_mix) {
        CorpusSpec s{count, length, std::move(scales), gap, noise, seed, bold_mix};
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& e : generate_corpus(dir, s)) out.emplace_back(e.file, e.text);
        return out;
      },
      py::arg("dir"), py::arg("count") = 50, py::arg("length") = 7, py::arg("scales") = std::vector<int>{3},
      py::arg("gap") = 4, py::arg("noise") = 0.0, py::arg("seed") = 1, py::arg("bold_mix") = false);
  m.def(
      "run_bench",
      [](const std::string& dir, const TemplateSet& ts, std::optional<std::string> truth, int jobs,
         std::optional<int> threshold, bool invert, int min_area, const std::string& segmenter, int gap,
         bool raw_totals, bool include_timing) {
        BenchOptions o;
        o.pipeline = make_options(threshold, invert, min_area, segmenter, gap, raw_totals);
        o.jobs = jobs;
        const auto entries = read_truth_csv(truth ? *truth : dir + "/truth.csv");
        BenchReport r;
        {
          py::gil_scoped_release release;
          r = run_bench(dir, entries, ts, o);
        }
        return report_json(r, include_timing);
      },
      py::arg("dir"), py::arg("templates"), py::arg("truth") = py::none(), py::arg("jobs") = 1,
      py::arg("threshold") = py::none(), py::arg("invert") = false, py::arg("min_area") = 8,
      py::arg("segmenter") = "ccl", py::arg("gap_threshold") = 0, py::arg("raw_totals") = false,
      py::arg("include_timing") = true, "Runs the benchmark and returns the JSON report text.");
}
