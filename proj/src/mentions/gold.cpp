#include <fstream>

#include "figcap/error.hpp"
#include "figcap/mentions.hpp"

namespace figcap {

std::vector<GoldSentence> load_gold_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<GoldSentence> gold;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw Error(path.string() + ":" + std::to_string(line_number) +
                  ": expected sentence<TAB>labels");
    }
    GoldSentence g;
    g.text = line.substr(0, tab);
    std::string labels = line.substr(tab + 1);
    std::size_t pos = 0;
    while (pos < labels.size()) {
      std::size_t comma = labels.find(',', pos);
      std::string item = labels.substr(pos, comma - pos);
      pos = comma == std::string::npos ? labels.size() : comma + 1;
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        int value = std::stoi(item, &used);
        if (used != item.size() || value < 1) throw std::invalid_argument(item);
        g.labels.insert(value);
      } catch (const std::exception&) {
        throw Error(path.string() + ":" + std::to_string(line_number) +
                    ": bad label '" + item + "'");
      }
    }
    gold.push_back(std::move(g));
  }
  return gold;
}

DetectorScore evaluate_detector(std::span<const GoldSentence> gold) {
  DetectorScore score;
  for (const GoldSentence& g : gold) {
    std::set<int> predicted;
    for (const FigureRef& ref : detect_figure_refs(g.text)) {
      predicted.insert(ref.figure_label);
    }
    for (int label : predicted) {
      if (g.labels.count(label)) {
        ++score.true_positives;
      } else {
        ++score.false_positives;
      }
    }
    for (int label : g.labels) {
      if (!predicted.count(label)) ++score.false_negatives;
    }
  }
  const auto tp = static_cast<double>(score.true_positives);
  const std::size_t predicted = score.true_positives + score.false_positives;
  const std::size_t actual = score.true_positives + score.false_negatives;
  score.precision = predicted == 0 ? 1.0 : tp / predicted;
  score.recall = actual == 0 ? 1.0 : tp / actual;
  return score;
}

}  // namespace figcap
