#include <random>

#include "doctest.h"
#include "fcc/error.hpp"
#include "fcc/recognize.hpp"
#include "fcc/synth.hpp"
#include "oracles.hpp"

using namespace fcc;

namespace {

Template make(char label, std::vector<double> f, std::optional<double> total = std::nullopt) {
  return Template{label, DirectionScheme::eight(), std::move(f), 1, total};
}

CodeHistogram hist(std::vector<std::size_t> counts) {
  std::size_t t = 0;
  for (auto v : counts) t += v;
  return {std::move(counts), t};
}

}  // namespace

TEST_CASE("distance examples") {
  const std::vector<double> a{1, 0, 0, 0, 0, 0, 0, 0}, b{0, 1, 0, 0, 0, 0, 0, 0};
  CHECK(distance(a, a) == 0.0);
  CHECK(distance(a, b) == 2.0);
  const std::vector<double> c{0.5, 0.5, 0, 0, 0, 0, 0, 0}, d{0.25, 0.75, 0, 0, 0, 0, 0, 0};
  CHECK(distance(c, d) == doctest::Approx(0.5));
  const std::vector<double> four{1, 0, 0, 0};
  CHECK_THROWS_AS(distance(a, four), RecognitionError);
}

TEST_CASE("distance is a metric on random histograms") {
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<int> v(0, 50);
  auto draw = [&] {
    std::vector<std::size_t> c(8);
    do {
      for (auto& x : c) x = static_cast<std::size_t>(v(rng));
    } while (hist(c).total == 0);
    return normalize(hist(c));
  };
  for (int i = 0; i < 2000; ++i) {
    const auto a = draw(), b = draw(), c = draw();
    const double ab = distance(a, b);
    CHECK(ab >= 0.0);
    CHECK(ab <= 2.0 + 1e-12);
    CHECK(ab == distance(b, a));
    CHECK(distance(a, a) == 0.0);
    CHECK(distance(a, c) <= ab + distance(b, c) + 1e-9);
  }
}

TEST_CASE("classify picks the nearest template") {
  TemplateSet ts;
  ts.templates = {make('A', {1, 0, 0, 0, 0, 0, 0, 0}), make('B', {0, 0, 1, 0, 0, 0, 0, 0}),
                  make('C', {0.5, 0, 0.5, 0, 0, 0, 0, 0})};
  const auto r = classify(hist({3, 0, 0, 0, 0, 0, 0, 0}), ts);
  CHECK(r.label == 'A');
  CHECK(r.distance == 0.0);
  REQUIRE(r.runner_up);
  CHECK(r.runner_up->first == 'C');
  CHECK(r.runner_up->second == doctest::Approx(1.0));
  CHECK(r.distance <= r.runner_up->second);
}

TEST_CASE("classify ties go to the smallest label") {
  TemplateSet ts;
  ts.templates = {make('B', {0, 1, 0, 0, 0, 0, 0, 0}), make('8', {0, 0, 1, 0, 0, 0, 0, 0})};
  const auto r = classify(hist({1, 0, 0, 0, 0, 0, 0, 0}), ts);
  CHECK(r.label == '8');
  REQUIRE(r.runner_up);
  CHECK(r.runner_up->first == 'B');
  CHECK(r.runner_up->second == r.distance);
}

TEST_CASE("runner-up skips duplicate labels") {
  TemplateSet ts;
  ts.templates = {make('A', {1, 0, 0, 0, 0, 0, 0, 0}), make('A', {0.9, 0.1, 0, 0, 0, 0, 0, 0}),
                  make('Z', {0, 0, 0, 0, 1, 0, 0, 0})};
  const auto r = classify(hist({1, 0, 0, 0, 0, 0, 0, 0}), ts);
  CHECK(r.label == 'A');
  REQUIRE(r.runner_up);
  CHECK(r.runner_up->first == 'Z');

  TemplateSet single;
  single.templates = {make('Q', {1, 0, 0, 0, 0, 0, 0, 0})};
  CHECK_FALSE(classify(hist({1, 0, 0, 0, 0, 0, 0, 0}), single).runner_up);
}

TEST_CASE("classify errors") {
  TemplateSet empty;
  CHECK_THROWS_AS(classify(hist({1, 0, 0, 0, 0, 0, 0, 0}), empty), RecognitionError);
  TemplateSet ts;
  ts.templates = {make('A', {1, 0, 0, 0, 0, 0, 0, 0})};
  CHECK_THROWS_AS(classify(hist({0, 0, 0, 0, 0, 0, 0, 0}), ts), RecognitionError);
  CHECK_THROWS_AS(classify(hist({1, 0, 0, 0}), ts), RecognitionError);
  CHECK_THROWS_AS(classify(hist({1, 0, 0, 0, 0, 0, 0, 0}), ts, MatchMode::RawTotals), RecognitionError);
}

TEST_CASE("raw-total matching compares scaled frequencies") {
  TemplateSet ts;
  ts.templates = {make('S', {0.25, 0, 0.25, 0, 0.25, 0, 0.25, 0}, 4.0),
                  make('L', {0.25, 0, 0.25, 0, 0.25, 0, 0.25, 0}, 40.0)};
  const auto small = classify(hist({1, 0, 1, 0, 1, 0, 1, 0}), ts, MatchMode::RawTotals);
  CHECK(small.label == 'S');
  CHECK(small.distance == 0.0);
  const auto large = classify(hist({9, 0, 11, 0, 10, 0, 10, 0}), ts, MatchMode::RawTotals);
  CHECK(large.label == 'L');
  CHECK(large.distance == doctest::Approx(2.0));
  // normalized matching cannot tell them apart: equal distance, smaller label
  CHECK(classify(hist({1, 0, 1, 0, 1, 0, 1, 0}), ts).label == 'L');
}

TEST_CASE("classify ignores integer rescaling of the histogram") {
  std::vector<Template> t;
  for (char c : kCharset) t.push_back(build_template(c, std::vector<BinaryImage>{render_glyph(c, 3)}, DirectionScheme::eight()));
  const TemplateSet ts{DirectionScheme::eight(), t};
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> v(0, 20);
  for (int i = 0; i < 300; ++i) {
    std::vector<std::size_t> c(8);
    for (auto& x : c) x = static_cast<std::size_t>(v(rng));
    if (hist(c).total == 0) continue;
    const char base = classify(hist(c), ts).label;
    for (std::size_t k : {2u, 3u, 7u}) {
      auto m = c;
      for (auto& x : m) x *= k;
      CHECK(classify(hist(m), ts).label == base);
    }
  }
}

TEST_CASE("glyph seed is the largest component") {
  const BinaryImage img = oracle::from_rows({"#....", "..###", "..###"});
  REQUIRE(glyph_seed(img));
  CHECK(*glyph_seed(img) == Pixel{1, 2});
  CHECK_FALSE(glyph_seed(BinaryImage(2, 2)));
  CHECK_THROWS_AS(glyph_chain(BinaryImage(2, 2), DirectionScheme::eight()), TraceError);
  const BinaryImage tie = oracle::from_rows({"##.#", "...#"});
  CHECK(*glyph_seed(tie) == Pixel{0, 0});
}

TEST_CASE("build_template") {
  const auto s = DirectionScheme::eight();
  const BinaryImage a3 = render_glyph('A', 3);
  const auto f3 = normalize(code_histogram(glyph_chain(a3, s)));
  const Template one = build_template('A', std::vector<BinaryImage>{a3}, s);
  CHECK(one.frequencies == f3);
  CHECK(one.sample_count == 1);
  REQUIRE(one.mean_total);
  CHECK(*one.mean_total == static_cast<double>(code_histogram(glyph_chain(a3, s)).total));

  const Template two = build_template('A', std::vector<BinaryImage>{a3, a3}, s);
  CHECK(two.frequencies == f3);
  CHECK(two.sample_count == 2);

  const BinaryImage a4 = render_glyph('A', 4);
  const auto f4 = normalize(code_histogram(glyph_chain(a4, s)));
  const Template mixed = build_template('A', std::vector<BinaryImage>{a3, a4}, s);
  for (std::size_t k = 0; k < 8; ++k) CHECK(mixed.frequencies[k] == doctest::Approx((f3[k] + f4[k]) / 2));

  try {
    build_template('A', std::vector<BinaryImage>{a3, BinaryImage(3, 3)}, s);
    FAIL("expected RecognitionError");
  } catch (const RecognitionError& e) {
    CHECK(std::string(e.what()).find("1") != std::string::npos);
  }
  CHECK_THROWS_AS(build_template('A', std::vector<BinaryImage>{BinaryImage(1, 1, true)}, s), RecognitionError);
  CHECK_THROWS_AS(build_template('A', std::vector<BinaryImage>{}, s), RecognitionError);
}

TEST_CASE("self-recognition over the embedded font") {
  const auto s = DirectionScheme::eight();
  TemplateSet ts{s, {}};
  for (char c : kCharset) ts.templates.push_back(build_template(c, std::vector<BinaryImage>{render_glyph(c, 3)}, s));
  for (char c : kCharset) {
    const auto r = recognize_glyph(render_glyph(c, 3), ts);
    CHECK(r.label == c);
    CHECK(r.distance == 0.0);
    CHECK(r.elapsed >= 0.0);
  }
}

TEST_CASE("4-dir histograms only see the aspect of a closed walk") {
  // A closed 4-dir walk has as many E as W and as many N as S moves, so
  // distinct glyphs collide often; self-match distance is still zero.
  const auto s = DirectionScheme::four();
  for (char c : kCharset) {
    const BinaryImage g = render_glyph(c, 3, true);
    const auto h = code_histogram(glyph_chain(g, s));
    CHECK(h.counts[0] == h.counts[2]);
    CHECK(h.counts[1] == h.counts[3]);
    const TemplateSet ts{s, {build_template(c, std::vector<BinaryImage>{g}, s)}};
    CHECK(recognize_glyph(g, ts).distance == 0.0);
  }
}

TEST_CASE("confusion matrix") {
  ConfusionMatrix empty;
  CHECK(empty.empty());
  CHECK(empty.total() == 0);
  CHECK(empty.accuracy() == 0.0);
  CHECK(confusion({}).empty());

  std::vector<std::pair<char, RecognitionResult>> rs;
  for (char c : std::string("AB0")) rs.push_back({c, RecognitionResult{c, 0.0, std::nullopt, 0.0}});
  rs.push_back({'O', RecognitionResult{'0', 0.1, std::nullopt, 0.0}});
  const ConfusionMatrix m = confusion(rs);
  CHECK(m.total() == 4);
  CHECK(m.correct() == 3);
  CHECK(m.at('O', '0') == 1);
  CHECK(m.at('0', 'O') == 0);
  CHECK(m.row_total('O') == 1);
  CHECK(m.accuracy() == 0.75);
}

TEST_CASE("labels") {
  CHECK(is_valid_label('A'));
  CHECK(is_valid_label('7'));
  CHECK_FALSE(is_valid_label('a'));
  CHECK_FALSE(is_valid_label(' '));
}

TEST_CASE("template file roundtrip") {
  TemplateSet ts{DirectionScheme::eight(), {}};
  for (char c : std::string("80BO"))
    ts.templates.push_back(build_template(c, std::vector<BinaryImage>{render_glyph(c, 2)}, ts.scheme));
  const std::string text = write_templates(ts);
  CHECK(text.rfind("FCCT1 8\n", 0) == 0);
  const TemplateSet back = read_templates(text);
  REQUIRE(back.templates.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(back.templates[i].label == ts.templates[i].label);
    CHECK(back.templates[i].frequencies == ts.templates[i].frequencies);
    CHECK(back.templates[i].sample_count == 1);
    CHECK_FALSE(back.templates[i].mean_total);
  }
  CHECK(write_templates(back) == text);

  const TemplateSet with = read_templates(write_templates(ts, true));
  REQUIRE(with.templates[0].mean_total);
  CHECK(*with.templates[0].mean_total == *ts.templates[0].mean_total);
}

TEST_CASE("template file errors") {
  CHECK_THROWS_AS(read_templates("FCCT2 8\n"), ParseError);
  CHECK_THROWS_AS(read_templates("FCCT1 6\n"), ParseError);
  CHECK_THROWS_AS(read_templates("FCCT1 4\nA 1 0.5 0.5\n"), ParseError);
  CHECK_THROWS_AS(read_templates("FCCT1 4\na 1 0.5 0.5 0 0\n"), ParseError);
  CHECK_THROWS_AS(read_templates("FCCT1 4\nA 1 0.5 0.4 0 0\n"), ParseError);
  CHECK_THROWS_AS(read_templates("FCCT1 4\nA 1 0.5 x 0 0\n"), ParseError);
  CHECK_NOTHROW(read_templates("FCCT1 4\nA 1 0.5 0.5 0 0\n"));
  CHECK_NOTHROW(read_templates("FCCT1 4\nA 1 0.5 0.5 0 0 12\n"));
  CHECK_THROWS_AS(load_templates_file("/nonexistent/templates.fcct"), std::runtime_error);
}
