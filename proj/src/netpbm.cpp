#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "fcc/error.hpp"
#include "fcc/raster.hpp"

namespace fcc {
namespace {

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("netpbm: " + msg, pos_); }

  // Skips whitespace and '#' comments.
  void skip_space() {
    while (!at_end()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (!at_end() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* what) {
    skip_space();
    if (at_end()) fail(std::string("truncated before ") + what);
    if (!std::isdigit(bytes_[pos_])) fail(std::string("expected ") + what);
    long v = 0;
    while (!at_end() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > 1'000'000'000L) fail(std::string(what) + " too large");
      ++pos_;
    }
    return v;
  }

  // Exactly one whitespace byte separates the header from a binary raster.
  void single_space() {
    if (at_end()) fail("truncated header");
    if (!std::isspace(bytes_[pos_])) fail("expected whitespace after header");
    ++pos_;
  }

  // P1 rasters may run digits together, so read one bit at a time.
  bool read_bit() {
    skip_space();
    if (at_end()) fail("truncated raster");
    const auto c = bytes_[pos_];
    if (c != '0' && c != '1') fail("expected 0 or 1");
    ++pos_;
    return c == '1';
  }

  std::uint8_t byte() {
    if (at_end()) fail("truncated raster");
    return bytes_[pos_++];
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

int read_dim(Reader& in, const char* what) {
  const std::size_t at = in.pos();
  const long v = in.read_uint(what);
  if (v <= 0) throw ParseError(std::string("netpbm: ") + what + " must be positive", at);
  return static_cast<int>(v);
}

void read_maxval(Reader& in) {
  const std::size_t at = in.pos();
  const long maxval = in.read_uint("maxval");
  if (maxval != 255) {
    throw ParseError("netpbm: unsupported maxval " + std::to_string(maxval) + " (need 255)", at);
  }
}

void append(std::vector<std::uint8_t>& out, const std::string& s) { out.insert(out.end(), s.begin(), s.end()); }

void write_ascii_rows(std::vector<std::uint8_t>& out, std::span<const std::uint8_t> px, int width,
                      std::size_t per_line) {
  std::string line;
  for (std::size_t i = 0; i < px.size(); ++i) {
    const std::size_t col = i % static_cast<std::size_t>(width);
    if (col != 0 && col % per_line != 0) line += ' ';
    line += std::to_string(px[i]);
    if (col + 1 == static_cast<std::size_t>(width) || (col + 1) % per_line == 0) {
      line += '\n';
      append(out, line);
      line.clear();
    }
  }
}

}  // namespace

Image load_image(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  if (bytes.size() < 2 || bytes[0] != 'P') in.fail("missing magic");
  const char kind = static_cast<char>(bytes[1]);
  if (kind != '1' && kind != '2' && kind != '4' && kind != '5') {
    throw ParseError(std::string("netpbm: unsupported magic P") + kind, 1);
  }
  for (int i = 0; i < 2; ++i) in.byte();

  const int width = read_dim(in, "width");
  const int height = read_dim(in, "height");
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);

  switch (kind) {
    case '1': {
      std::vector<std::uint8_t> px(n);
      for (auto& v : px) v = in.read_bit() ? 1 : 0;
      return BinaryImage(width, height, std::move(px));
    }
    case '4': {
      in.single_space();
      std::vector<std::uint8_t> px(n);
      const std::size_t row_bytes = (static_cast<std::size_t>(width) + 7) / 8;
      for (int r = 0; r < height; ++r) {
        for (std::size_t b = 0; b < row_bytes; ++b) {
          const std::uint8_t packed = in.byte();
          for (int bit = 0; bit < 8; ++bit) {
            const std::size_t col = b * 8 + static_cast<std::size_t>(bit);
            if (col >= static_cast<std::size_t>(width)) break;
            px[static_cast<std::size_t>(r) * width + col] = (packed >> (7 - bit)) & 1;
          }
        }
      }
      return BinaryImage(width, height, std::move(px));
    }
    case '2': {
      read_maxval(in);
      std::vector<std::uint8_t> px(n);
      for (auto& v : px) {
        const std::size_t at = in.pos();
        const long value = in.read_uint("sample");
        if (value > 255) throw ParseError("netpbm: sample exceeds maxval", at);
        v = static_cast<std::uint8_t>(value);
      }
      return GrayImage(width, height, std::move(px));
    }
    default: {  // '5'
      read_maxval(in);
      in.single_space();
      std::vector<std::uint8_t> px(n);
      for (auto& v : px) v = in.byte();
      return GrayImage(width, height, std::move(px));
    }
  }
}

std::vector<std::uint8_t> save_image(const Image& img, NetpbmFormat format) {
  const bool binary_format = format == NetpbmFormat::P1 || format == NetpbmFormat::P4;
  if (binary_format != std::holds_alternative<BinaryImage>(img)) {
    throw std::invalid_argument("save_image: format does not match image kind");
  }

  std::vector<std::uint8_t> out;
  if (const auto* bin = std::get_if<BinaryImage>(&img)) {
    const int w = bin->width();
    const int h = bin->height();
    if (format == NetpbmFormat::P1) {
      append(out, "P1\n" + std::to_string(w) + " " + std::to_string(h) + "\n");
      write_ascii_rows(out, bin->pixels(), w, 35);
    } else {
      append(out, "P4\n" + std::to_string(w) + " " + std::to_string(h) + "\n");
      for (int r = 0; r < h; ++r) {
        std::uint8_t packed = 0;
        for (int c = 0; c < w; ++c) {
          if (bin->at(r, c)) packed |= static_cast<std::uint8_t>(0x80u >> (c % 8));
          if (c % 8 == 7 || c == w - 1) {
            out.push_back(packed);
            packed = 0;
          }
        }
      }
    }
    return out;
  }

  const auto& gray = std::get<GrayImage>(img);
  const std::string header = std::to_string(gray.width()) + " " + std::to_string(gray.height()) + "\n255\n";
  if (format == NetpbmFormat::P2) {
    append(out, "P2\n" + header);
    write_ascii_rows(out, gray.pixels(), gray.width(), 17);
  } else {
    append(out, "P5\n" + header);
    out.insert(out.end(), gray.pixels().begin(), gray.pixels().end());
  }
  return out;
}

Image load_image_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return load_image(bytes);
}

void save_image_file(const Image& img, NetpbmFormat format, const std::string& path) {
  const auto bytes = save_image(img, format);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("cannot write " + path);
}

}  // namespace fcc
