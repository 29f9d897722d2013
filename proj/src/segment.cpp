#include "fcc/segment.hpp"

#include <algorithm>
#include <stdexcept>

namespace fcc {

std::string_view technique_name(Technique t) {
  return t == Technique::Projection ? "projection" : "ccl";
}

std::vector<int> column_profile(const BinaryImage& img) {
  std::vector<int> profile(static_cast<std::size_t>(img.width()), 0);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) profile[c] += img.at(r, c) ? 1 : 0;
  }
  return profile;
}

Segmentation segment_by_projection(const BinaryImage& img, int gap_threshold) {
  if (gap_threshold < 0) throw std::invalid_argument("segment_by_projection: gap_threshold must be >= 0");
  const auto profile = column_profile(img);
  Segmentation seg{{}, Technique::Projection};

  int c = 0;
  const int w = img.width();
  while (c < w) {
    if (profile[c] <= gap_threshold) {
      ++c;
      continue;
    }
    const int left = c;
    while (c < w && profile[c] > gap_threshold) ++c;
    const int right = c - 1;

    // profile > threshold >= 0 guarantees at least one foreground row.
    int top = img.height();
    int bottom = -1;
    for (int r = 0; r < img.height(); ++r) {
      for (int x = left; x <= right; ++x) {
        if (img.at(r, x)) {
          top = std::min(top, r);
          bottom = std::max(bottom, r);
          break;
        }
      }
    }
    seg.boxes.push_back(Box{top, left, bottom, right});
  }
  return seg;
}

namespace {

class DisjointSet {
 public:
  int make() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  std::size_t size() const noexcept { return parent_.size(); }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // Smaller id wins, keeping roots at the earliest provisional label.
    if (a < b) parent_[b] = a;
    else parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

LabelMap label_components(const BinaryImage& img, int connectivity) {
  if (connectivity != 4 && connectivity != 8) {
    throw std::invalid_argument("label_components: connectivity must be 4 or 8");
  }
  const int w = img.width();
  const int h = img.height();
  LabelMap lm{w, h, std::vector<int>(img.size(), 0), 0};

  // Pass 1: provisional labels from the already-visited neighbours
  // (W, and NW/N/NE for 8-connectivity, N for 4).
  DisjointSet sets;
  sets.make();  // slot 0 = background
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!img.at(r, c)) continue;
      int label = 0;
      auto visit = [&](int rr, int cc) {
        if (rr < 0 || cc < 0 || cc >= w) return;
        const int other = lm.labels[img.index(rr, cc)];
        if (other == 0) return;
        if (label == 0) label = other;
        else sets.unite(label, other);
      };
      visit(r, c - 1);
      visit(r - 1, c);
      if (connectivity == 8) {
        visit(r - 1, c - 1);
        visit(r - 1, c + 1);
      }
      if (label == 0) label = sets.make();
      lm.labels[img.index(r, c)] = label;
    }
  }

  // Pass 2: resolve equivalences and renumber in raster order of first pixel.
  std::vector<int> final_id(sets.size(), 0);
  for (auto& label : lm.labels) {
    if (label == 0) continue;
    const int root = sets.find(label);
    if (final_id[root] == 0) final_id[root] = ++lm.n_components;
    label = final_id[root];
  }
  return lm;
}

std::vector<ComponentStats> component_stats(const LabelMap& lm) {
  std::vector<ComponentStats> stats(static_cast<std::size_t>(lm.n_components));
  for (int i = 0; i < lm.n_components; ++i) {
    stats[i].label = i + 1;
    stats[i].bounds = Box{lm.height, lm.width, -1, -1};
  }
  for (int r = 0; r < lm.height; ++r) {
    for (int c = 0; c < lm.width; ++c) {
      const int id = lm.at(r, c);
      if (id == 0) continue;
      auto& s = stats[id - 1];
      ++s.area;
      s.bounds.top = std::min(s.bounds.top, r);
      s.bounds.bottom = std::max(s.bounds.bottom, r);
      s.bounds.left = std::min(s.bounds.left, c);
      s.bounds.right = std::max(s.bounds.right, c);
    }
  }
  return stats;
}

Segmentation components_to_boxes(const LabelMap& lm, int min_area, double min_height_fraction) {
  Segmentation seg{{}, Technique::Ccl};
  const double min_height = min_height_fraction * lm.height;
  for (const auto& s : component_stats(lm)) {
    if (s.area < static_cast<std::size_t>(std::max(min_area, 0))) continue;
    if (s.bounds.height() < min_height) continue;
    seg.boxes.push_back(s.bounds);
  }
  std::stable_sort(seg.boxes.begin(), seg.boxes.end(), [](const Box& a, const Box& b) {
    return a.left != b.left ? a.left < b.left : a.top < b.top;
  });
  return seg;
}

BinaryImage crop(const BinaryImage& img, const Box& box) {
  if (box.top < 0 || box.left < 0 || box.top > box.bottom || box.left > box.right ||
      box.bottom >= img.height() || box.right >= img.width()) {
    throw std::out_of_range("crop: box outside image");
  }
  BinaryImage out(box.width(), box.height());
  for (int r = 0; r < box.height(); ++r) {
    for (int c = 0; c < box.width(); ++c) out.set(r, c, img.at(box.top + r, box.left + c));
  }
  return out;
}

}  // namespace fcc
