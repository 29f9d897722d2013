#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fcc/error.hpp"
#include "fcc/recognize.hpp"

namespace fcc {
namespace {

constexpr std::string_view kMagic = "FCCT1";
constexpr double kSumTolerance = 1e-6;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string write_templates(const TemplateSet& ts, bool with_totals) {
  std::string out = std::string(kMagic) + " " + std::to_string(ts.scheme.connectivity()) + "\n";
  for (const auto& t : ts.templates) {
    out += t.label;
    out += ' ';
    out += std::to_string(t.sample_count);
    for (double f : t.frequencies) out += " " + format_double(f);
    if (with_totals) {
      if (!t.mean_total) throw std::invalid_argument("write_templates: template has no code totals");
      out += " " + format_double(*t.mean_total);
    }
    out += '\n';
  }
  return out;
}

TemplateSet read_templates(std::string_view text) {
  TemplateSet ts;
  std::size_t offset = 0;
  bool have_header = false;
  std::size_t connectivity = 0;

  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(offset, end - offset);
    const auto fields = split_fields(line);
    auto fail = [&](const std::string& msg) -> void { throw ParseError("template file: " + msg, offset); };

    if (fields.empty()) {
      offset = end + 1;
      continue;
    }
    if (!have_header) {
      int c = 0;
      if (fields.size() != 2 || fields[0] != kMagic) fail("missing FCCT1 magic");
      if (!parse_number(fields[1], c) || (c != 4 && c != 8)) fail("connectivity must be 4 or 8");
      ts.scheme = DirectionScheme::from_connectivity(c);
      connectivity = static_cast<std::size_t>(c);
      have_header = true;
      offset = end + 1;
      continue;
    }

    if (fields.size() != connectivity + 2 && fields.size() != connectivity + 3) {
      fail("expected " + std::to_string(connectivity + 2) + " fields, got " + std::to_string(fields.size()));
    }
    Template t;
    t.scheme = ts.scheme;
    if (fields[0].size() != 1 || !is_valid_label(fields[0][0])) fail("invalid label '" + std::string(fields[0]) + "'");
    t.label = fields[0][0];
    if (!parse_number(fields[1], t.sample_count) || t.sample_count == 0) fail("invalid sample count");
    double sum = 0.0;
    for (std::size_t k = 0; k < connectivity; ++k) {
      double f = 0.0;
      if (!parse_number(fields[2 + k], f) || !std::isfinite(f) || f < 0.0) fail("invalid frequency");
      t.frequencies.push_back(f);
      sum += f;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) fail("frequencies do not sum to 1");
    if (fields.size() == connectivity + 3) {
      double total = 0.0;
      if (!parse_number(fields.back(), total) || !std::isfinite(total) || total <= 0.0) fail("invalid code total");
      t.mean_total = total;
    }
    ts.templates.push_back(std::move(t));
    offset = end + 1;
  }
  if (!have_header) throw ParseError("template file: missing FCCT1 magic", 0);
  return ts;
}

TemplateSet load_templates_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return read_templates(ss.str());
}

void save_templates_file(const TemplateSet& ts, const std::string& path, bool with_totals) {
  const std::string text = write_templates(ts, with_totals);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

}  // namespace fcc
