#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "figcap/docparse.hpp"

namespace figcap {

double default_row_tolerance(std::span<const OcrBox> boxes) {
  if (boxes.empty()) return 0;
  std::vector<double> heights;
  heights.reserve(boxes.size());
  for (const OcrBox& box : boxes) heights.push_back(box.height);
  std::sort(heights.begin(), heights.end());
  const std::size_t mid = heights.size() / 2;
  const double median = heights.size() % 2 == 1
                            ? heights[mid]
                            : (heights[mid - 1] + heights[mid]) / 2;
  return median / 2;
}

std::string order_ocr(std::span<const OcrBox> boxes, double row_tolerance) {
  if (row_tolerance < 0) throw Error("order_ocr: negative row tolerance");
  std::vector<const OcrBox*> sorted;
  sorted.reserve(boxes.size());
  for (const OcrBox& box : boxes) sorted.push_back(&box);
  // Total order so the result does not depend on the input permutation.
  auto key = [](const OcrBox* b) {
    return std::tie(b->y, b->x, b->text, b->width, b->height);
  };
  std::sort(sorted.begin(), sorted.end(),
            [&](const OcrBox* a, const OcrBox* b) { return key(a) < key(b); });

  std::vector<std::vector<const OcrBox*>> rows;
  double anchor = 0;
  for (const OcrBox* box : sorted) {
    if (rows.empty() || box->y - anchor > row_tolerance) {
      rows.emplace_back();
      anchor = box->y;
    }
    rows.back().push_back(box);
  }

  std::string out;
  for (auto& row : rows) {
    std::stable_sort(row.begin(), row.end(),
                     [](const OcrBox* a, const OcrBox* b) { return a->x < b->x; });
    for (const OcrBox* box : row) {
      std::string text = normalize_whitespace(box->text);
      if (text.empty()) continue;
      if (!out.empty()) out += ' ';
      out += text;
    }
  }
  return out;
}

std::string order_ocr(std::span<const OcrBox> boxes) {
  return order_ocr(boxes, default_row_tolerance(boxes));
}

}  // namespace figcap
