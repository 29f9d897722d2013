// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "fcc/bench.hpp"
#include "fcc/chaincode.hpp"
#include "fcc/recognize.hpp"
#include "fcc/segment.hpp"
#include "fcc/synth.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace fcc;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s  %2d  %-34s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Pixel first_pixel(const BinaryImage& img) {
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c < img.width(); ++c)
      if (img.at(r, c)) return {r, c};
  return {-1, -1};
}

std::vector<int> as_ints(const ChainCode& cc) { return {cc.codes.begin(), cc.codes.end()}; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Criteria 1 and 2 share these traces.
std::vector<ChainCode> blob_traces;

}  // namespace

int main() {
  criterion(1, "chain-code roundtrip", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    int checked = 0, bad = 0;
    for (int conn : {8, 4}) {
      const auto scheme = DirectionScheme::from_connectivity(conn);
      for (int i = 0; i < 500; ++i) {
        const BinaryImage blob = oracle::random_blob(rng, 64, conn);
        const ChainCode cc = trace_boundary(blob, first_pixel(blob), scheme);
        const auto path = decode(cc);
        const std::set<Pixel> got(path.begin(), path.end());
        BinaryImage drawn(blob.width(), blob.height());
        for (const Pixel p : path) drawn.set(p.row, p.col, true);
        const bool ok = got == oracle::outer_boundary(blob, conn) &&
                        trace_boundary(drawn, cc.start, scheme).codes == cc.codes;
        bad += ok ? 0 : 1;
        ++checked;
        blob_traces.push_back(cc);
      }
    }
    const double s = seconds_since(t0);
    return Outcome{bad == 0 && s < 5.0, std::to_string(checked - bad) + "/" + std::to_string(checked) +
                                            " blobs (8- and 4-dir) exact, " + fmt("%.2f s", s) + " < 5 s"};
  });

  criterion(2, "closure", [] {
    int bad = 0, n = 0;
    for (const auto& cc : blob_traces) {
      bad += net_displacement(cc) == Pixel{0, 0} ? 0 : 1;
      ++n;
    }
    for (char c : kCharset) {
      for (int s = 1; s <= 4; ++s) {
        bad += net_displacement(glyph_chain(render_glyph(c, s), DirectionScheme::eight())) == Pixel{0, 0} ? 0 : 1;
        ++n;
      }
    }
    return Outcome{bad == 0 && n == static_cast<int>(blob_traces.size()) + 144,
                   std::to_string(n - bad) + "/" + std::to_string(n) + " traces close (blobs + 36 glyphs x scales 1-4)"};
  });

  criterion(3, "CCL equals flood-fill oracle", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(3003);
    int bad = 0;
    const int images = 1000;
    for (int i = 0; i < images; ++i) {
      const double density = 0.1 + 0.8 * (i % 81) / 80.0;
      const BinaryImage img = oracle::random_image(rng, 64, 64, density);
      for (int conn : {8, 4}) {
        int n = 0;
        const auto expect = oracle::flood_labels(img, conn, &n);
        const LabelMap lm = label_components(img, conn);
        bad += (lm.n_components == n && lm.labels == expect) ? 0 : 1;
      }
    }
    const double s = seconds_since(t0);
    return Outcome{bad == 0 && s < 10.0, std::to_string(2 * images - bad) + "/" + std::to_string(2 * images) +
                                             " labelings identical (64x64, density 0.1-0.9, 4 and 8), " +
                                             fmt("%.2f s", s) + " < 10 s"};
  });

  criterion(4, "translation invariance", [] {
    std::mt19937_64 rng(4004);
    std::uniform_int_distribution<int> off(0, 20);
    int bad = 0;
    for (int i = 0; i < 100; ++i) {
      const BinaryImage blob = oracle::random_blob(rng, 48, 8);
      const Pixel seed = first_pixel(blob);
      const int dr = off(rng), dc = off(rng);
      const ChainCode a = trace_boundary(blob, seed, DirectionScheme::eight());
      const ChainCode b =
          trace_boundary(oracle::translate(blob, dr, dc), {seed.row + dr, seed.col + dc}, DirectionScheme::eight());
      bad += (a.codes == b.codes && b.start == Pixel{a.start.row + dr, a.start.col + dc}) ? 0 : 1;
    }
    return Outcome{bad == 0, std::to_string(100 - bad) + "/100 blobs: codes identical, start shifted exactly"};
  });

  criterion(5, "hand-derived traces", [] {
    const auto e = DirectionScheme::eight(), f = DirectionScheme::four();
    const BinaryImage sq2(2, 2, true), sq4(4, 4, true), dot(1, 1, true);
    const std::vector<int> want4x4{0, 0, 0, 6, 6, 6, 4, 4, 4, 2, 2, 2};
    const bool a = as_ints(trace_boundary(sq2, {0, 0}, e)) == std::vector<int>{0, 6, 4, 2};
    const bool b = as_ints(trace_boundary(sq2, {0, 0}, f)) == std::vector<int>{0, 3, 2, 1};
    const bool c = as_ints(trace_boundary(sq4, {0, 0}, e)) == want4x4 && oracle::moore_codes(sq4) == want4x4;
    const bool d = trace_boundary(dot, {0, 0}, e).codes.empty();
    return Outcome{a && b && c && d, std::string("2x2 8-dir ") + (a ? "ok" : "bad") + ", 2x2 4-dir " +
                                         (b ? "ok" : "bad") + ", 4x4 " + (c ? "ok" : "bad") + ", pixel " +
                                         (d ? "ok" : "bad")};
  });

  criterion(6, "self-recognition", [] {
    const TemplateSet ts = support::font_templates(3);
    int hits = 0;
    for (char c : kCharset) {
      const auto r = recognize_glyph(render_glyph(c, 3), ts);
      hits += (r.label == c && r.distance == 0.0) ? 1 : 0;
    }
    return Outcome{hits == 36, std::to_string(hits) + "/36 glyphs at scale 3 matched with distance 0"};
  });

  criterion(7, "end-to-end clean plates", [] {
    const auto t0 = std::chrono::steady_clock::now();
    support::TempDir dir("accept_clean");
    CorpusSpec spec;
    spec.count = 50;
    spec.length = 7;
    spec.seed = 7;
    const auto truth = generate_corpus(dir.str(), spec);
    const auto ts = support::font_templates(3);
    BenchOptions ccl, proj;
    proj.pipeline.segmenter = Technique::Projection;
    const BenchReport rc = run_bench(dir.str(), truth, ts, ccl);
    const BenchReport rp = run_bench(dir.str(), truth, ts, proj);
    const double s = seconds_since(t0);
    const bool ok = rc.projection.successful == 50 && rc.ccl.successful == 50 && rc.correct == 350 &&
                    rc.scored == 350 && rp.correct == 350 && rp.scored == 350 && s < 10.0;
    return Outcome{ok, "segmented projection " + std::to_string(rc.projection.successful) + "/50, ccl " +
                           std::to_string(rc.ccl.successful) + "/50; recognized " + std::to_string(rc.correct) +
                           "/350 (ccl), " + std::to_string(rp.correct) + "/350 (projection), " + fmt("%.2f s", s) +
                           " < 10 s"};
  });

  criterion(8, "denominator convention", [] {
    support::TempDir dir("accept_denominator");
    CorpusSpec spec;
    spec.count = 5;
    spec.length = 7;
    spec.seed = 8;
    const auto truth = generate_corpus(dir.str(), spec);
    // plate 4 becomes blank paper: no segmenter can split it
    const Image last = load_image_file(dir / truth[4].file);
    const auto& g = std::get<GrayImage>(last);
    save_image_file(GrayImage(g.width(), g.height(), kPaper), NetpbmFormat::P5, dir / truth[4].file);
    const BenchReport r = run_bench(dir.str(), truth, support::font_templates(3), {});
    const auto j = nlohmann::json::parse(report_json(r, false));
    const auto scored = j["recognition"]["scored"].get<int>();
    const bool ok = r.ccl.successful == 4 && r.ccl.total == 5 && scored == 28 && r.characters == 35 &&
                    j["recognition"]["ratio"].get<double>() == static_cast<double>(r.correct) / 28.0;
    return Outcome{ok, "segmentation " + std::to_string(r.ccl.successful) + "/5, recognition " +
                           std::to_string(r.correct) + "/" + std::to_string(scored) + " (expected denominator 28)"};
  });

  criterion(9, "similar-pattern confusion surface", [] {
    support::TempDir dir("accept_noisy");
    CorpusSpec spec;
    spec.count = 200;
    spec.length = 1;
    spec.noise = 0.02;
    spec.seed = 9;
    const auto truth = generate_corpus(dir.str(), spec);
    const BenchReport r = run_bench(dir.str(), truth, support::font_templates(3), {});
    const auto off = r.off_diagonal(), similar = r.off_diagonal_similar();
    // "concentrated": the pair set holds a strict majority of the error mass
    const bool ok = off == 0 || 2 * similar > off;
    return Outcome{ok, std::to_string(r.scored) + " glyphs, accuracy " + fmt("%.4f", r.recognition_ratio()) +
                           ", off-diagonal " + std::to_string(off) + ", in similar pairs " +
                           std::to_string(similar)};
  });

  criterion(10, "L1 metric properties", [] {
    std::mt19937_64 rng(1010);
    std::uniform_int_distribution<int> v(0, 40);
    std::uniform_int_distribution<int> zero(0, 3);
    auto draw = [&] {
      CodeHistogram h{std::vector<std::size_t>(8), 0};
      while (h.total == 0) {
        for (auto& c : h.counts) {
          c = zero(rng) == 0 ? 0 : static_cast<std::size_t>(v(rng));
          h.total += c;
        }
      }
      return normalize(h);
    };
    int bad = 0;
    const double tol = 1e-9;
    for (int i = 0; i < 10000; ++i) {
      const auto a = draw(), b = draw(), c = draw();
      const double ab = distance(a, b), ba = distance(b, a);
      bad += ab >= -tol ? 0 : 1;
      bad += std::abs(ab - ba) <= tol ? 0 : 1;
      bad += distance(a, a) <= tol ? 0 : 1;
      bad += (a != b && ab <= tol) ? 1 : 0;
      bad += distance(a, c) <= ab + distance(b, c) + tol ? 0 : 1;
    }
    return Outcome{bad == 0, "10000 random pairs, " + std::to_string(bad) + " violations at tolerance 1e-9"};
  });

  criterion(11, "determinism", [] {
    auto run_once = [](const std::string& tag) {
      support::TempDir dir(tag);
      CorpusSpec spec;
      spec.count = 30;
      spec.scales = {2, 3, 4};
      spec.noise = 0.01;
      spec.bold_mix = true;
      spec.seed = 11;
      const auto truth = generate_corpus(dir.str(), spec);
      BenchOptions opts;
      opts.jobs = 3;
      auto j = nlohmann::ordered_json::parse(report_json(run_bench(dir.str(), truth, support::font_templates(3), opts)));
      j.erase("timing");
      return j.dump(2);
    };
    const std::string a = run_once("accept_det_a"), b = run_once("accept_det_b");
    return Outcome{a == b, std::string("two seeded runs ") + (a == b ? "byte-identical" : "differ") +
                               " outside the timing key (" + std::to_string(a.size()) + " bytes)"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
