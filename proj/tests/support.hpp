#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "fcc/recognize.hpp"
#include "fcc/synth.hpp"

namespace support {

namespace fs = std::filesystem;

// Fresh scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("fcc_" + tag + "_" + std::to_string(::getpid()))) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Compares `actual` with the golden file; FCC_UPDATE_GOLDEN=1 rewrites it.
inline bool matches_golden(const std::string& name, const std::string& actual) {
  const std::string path = std::string(FCC_GOLDEN_DIR) + "/" + name;
  if (const char* u = std::getenv("FCC_UPDATE_GOLDEN"); u && std::string(u) == "1") {
    std::ofstream(path, std::ios::binary) << actual;
    return true;
  }
  return fs::exists(path) && read_file(path) == actual;
}

// One template per charset glyph, rendered clean at `scale`.
inline fcc::TemplateSet font_templates(int scale, fcc::DirectionScheme scheme = fcc::DirectionScheme::eight()) {
  fcc::TemplateSet ts{scheme, {}};
  for (char c : fcc::kCharset) {
    ts.templates.push_back(fcc::build_template(c, std::vector<fcc::BinaryImage>{fcc::render_glyph(c, scale)}, scheme));
  }
  return ts;
}

}  // namespace support
