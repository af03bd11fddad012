#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "figcap/error.hpp"
#include "figcap/metrics.hpp"

namespace figcap {

namespace {

// en-v1: the common English function-word list (NLTK's), minus entries with
// apostrophes, which the tokenizer never produces. Frozen; changes go into a
// new id.
constexpr const char* kEnglishV1 =
    "i me my myself we our ours ourselves you your yours yourself yourselves "
    "he him his himself she her hers herself it its itself they them their "
    "theirs themselves what which who whom this that these those am is are "
    "was were be been being have has had having do does did doing a an the "
    "and but if or because as until while of at by for with about against "
    "between into through during before after above below to from up down in "
    "out on off over under again further then once here there when where why "
    "how all any both each few more most other some such no nor not only own "
    "same so than too very s t can will just don should now d ll m o re ve y "
    "ain aren couldn didn doesn hadn hasn haven isn ma mightn mustn needn "
    "shan shouldn wasn weren won wouldn";

std::unordered_set<std::string> split_words(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string word;
  while (in >> word) words.insert(word);
  return words;
}

}  // namespace

const std::unordered_set<std::string>& stopword_list(std::string_view id) {
  static std::mutex mutex;
  static std::map<std::string, std::unordered_set<std::string>, std::less<>>
      cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(id); it != cache.end()) return it->second;

  std::unordered_set<std::string> words;
  if (id == "en-v1") {
    std::istringstream in(kEnglishV1);
    words = split_words(in);
  } else {
    std::ifstream in{std::string(id)};
    if (!in) throw Error("unknown stopword list '" + std::string(id) + "'");
    words = split_words(in);
  }
  return cache.emplace(std::string(id), std::move(words)).first->second;
}

}  // namespace figcap
