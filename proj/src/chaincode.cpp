#include "fcc/chaincode.hpp"

#include <array>
#include <deque>
#include <stdexcept>

#include "fcc/error.hpp"

namespace fcc {
namespace {

constexpr std::array<Pixel, 8> kSteps8 = {{
    {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1},
}};
constexpr std::array<Pixel, 4> kSteps4 = {{{0, 1}, {-1, 0}, {0, -1}, {1, 0}}};

struct Component {
  Pixel start;          // topmost, then leftmost
  std::size_t area = 0;
  bool four_connected = true;
};

// Pixels reachable from `seed` through foreground under `connectivity`.
std::vector<Pixel> flood(const BinaryImage& img, Pixel seed, int connectivity) {
  std::vector<std::uint8_t> seen(img.size(), 0);
  std::vector<Pixel> out;
  std::deque<Pixel> queue{seed};
  seen[img.index(seed.row, seed.col)] = 1;
  while (!queue.empty()) {
    const Pixel p = queue.front();
    queue.pop_front();
    out.push_back(p);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if ((dr == 0 && dc == 0) || (connectivity == 4 && dr != 0 && dc != 0)) continue;
        const int r = p.row + dr;
        const int c = p.col + dc;
        if (!img.fg(r, c) || seen[img.index(r, c)]) continue;
        seen[img.index(r, c)] = 1;
        queue.push_back({r, c});
      }
    }
  }
  return out;
}

Component describe_component(const BinaryImage& img, Pixel seed, bool check_four) {
  const auto pixels = flood(img, seed, 8);
  Component comp;
  comp.start = pixels.front();
  for (const auto& p : pixels) comp.start = std::min(comp.start, p);
  comp.area = pixels.size();
  if (check_four) comp.four_connected = flood(img, seed, 4).size() == pixels.size();
  return comp;
}

}  // namespace

DirectionScheme DirectionScheme::from_connectivity(int connectivity) {
  if (connectivity == 4) return four();
  if (connectivity == 8) return eight();
  throw std::invalid_argument("direction scheme: connectivity must be 4 or 8, got " +
                              std::to_string(connectivity));
}

Pixel DirectionScheme::step(int code) const {
  if (code < 0 || code >= connectivity_) throw std::out_of_range("direction code out of range");
  return connectivity_ == 8 ? kSteps8[code] : kSteps4[code];
}

int DirectionScheme::code_of(int drow, int dcol) const noexcept {
  for (int k = 0; k < connectivity_; ++k) {
    const Pixel s = connectivity_ == 8 ? kSteps8[k] : kSteps4[k];
    if (s.row == drow && s.col == dcol) return k;
  }
  return -1;
}

std::string ChainCode::to_string() const {
  std::string s;
  s.reserve(codes.size());
  for (auto c : codes) s += static_cast<char>('0' + c);
  return s;
}

ChainCode trace_boundary(const BinaryImage& img, Pixel seed, DirectionScheme scheme) {
  if (img.count() == 0) throw TraceError("trace_boundary: image has no foreground");
  if (!img.contains(seed)) throw TraceError("trace_boundary: seed outside image");
  if (!img.at(seed)) throw TraceError("trace_boundary: seed is a background pixel");

  const int n = scheme.connectivity();
  const Component comp = describe_component(img, seed, n == 4);
  if (!comp.four_connected) {
    throw TraceError("trace_boundary: component is not 4-connected, cannot trace with the 4-direction scheme");
  }

  ChainCode cc{comp.start, scheme, {}};
  auto is_fg = [&](Pixel p, int code) {
    const Pixel s = scheme.step(code);
    return img.fg(p.row + s.row, p.col + s.col);
  };

  // Nothing to the W, NW, N or NE of the start, so the first clockwise scan
  // begins at West.
  Pixel cur = comp.start;
  int scan_from = n == 8 ? 4 : 2;
  int first_move = -1;
  // Every boundary pixel is left at most once per incoming neighbour.
  const std::size_t limit = comp.area * static_cast<std::size_t>(n) + 4;

  for (std::size_t guard = 0;; ++guard) {
    int move = -1;
    for (int i = 0; i < n; ++i) {
      const int code = ((scan_from - i) % n + n) % n;
      if (is_fg(cur, code)) {
        move = code;
        break;
      }
    }
    if (move < 0) return cc;  // isolated pixel

    if (cur == comp.start) {
      if (first_move < 0) first_move = move;
      else if (move == first_move) return cc;
    }
    if (guard > limit) throw TraceError("trace_boundary: walk did not close");

    const Pixel s = scheme.step(move);
    const Pixel next{cur.row + s.row, cur.col + s.col};
    cc.codes.push_back(static_cast<std::uint8_t>(move));

    if (n == 8) {
      // Resume from the background neighbour checked just before `next`.
      const Pixel back = scheme.step((move + 1) % n);
      scan_from = scheme.code_of(cur.row + back.row - next.row, cur.col + back.col - next.col);
    } else {
      scan_from = (move + 1) % n;
    }
    cur = next;
  }
}

std::vector<Pixel> decode(const ChainCode& cc) {
  std::vector<Pixel> out;
  out.reserve(cc.codes.size() + 1);
  Pixel p = cc.start;
  auto push = [&](Pixel q) {
    if (q.row < 0 || q.col < 0) throw std::domain_error("decode: chain leaves the non-negative quadrant");
    out.push_back(q);
  };
  push(p);
  for (auto code : cc.codes) {
    const Pixel s = cc.scheme.step(code);
    p = {p.row + s.row, p.col + s.col};
    push(p);
  }
  return out;
}

Pixel net_displacement(const ChainCode& cc) {
  Pixel d{0, 0};
  for (auto code : cc.codes) {
    const Pixel s = cc.scheme.step(code);
    d.row += s.row;
    d.col += s.col;
  }
  return d;
}

CodeHistogram code_histogram(const ChainCode& cc) {
  CodeHistogram h{std::vector<std::size_t>(static_cast<std::size_t>(cc.scheme.connectivity()), 0), 0};
  for (auto code : cc.codes) {
    if (code >= h.counts.size()) throw std::out_of_range("code_histogram: invalid code for scheme");
    ++h.counts[code];
  }
  h.total = cc.codes.size();
  return h;
}

std::vector<double> normalize(const CodeHistogram& h) {
  if (h.total == 0) throw RecognitionError("normalize: empty histogram (degenerate glyph)");
  std::vector<double> f(h.counts.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = static_cast<double>(h.counts[k]) / static_cast<double>(h.total);
  }
  return f;
}

}  // namespace fcc
