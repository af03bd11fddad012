#include "figcap/analysis.hpp"
#include "figcap/error.hpp"

namespace figcap {

Json rating_to_json(const AspectRating& r) {
  Json j = {{"figure_id", r.figure_id},     {"annotator_id", r.annotator_id},
            {"image_text", r.image_text},   {"visual_desc", r.visual_desc},
            {"takeaway", r.takeaway},       {"helpfulness", r.helpfulness},
            {"valid", r.valid}};
  j["exclusion_reason"] =
      r.exclusion_reason.empty() ? Json(nullptr) : Json(r.exclusion_reason);
  return j;
}

AspectRating rating_from_json(const Json& rec) {
  AspectRating r;
  r.figure_id = require_string(rec, "figure_id");
  r.annotator_id = rec.contains("annotator_id") ? require_string(rec, "annotator_id") : "";
  r.valid = !rec.contains("valid") || rec.at("valid").get<bool>();
  if (rec.contains("exclusion_reason") && !rec.at("exclusion_reason").is_null()) {
    r.exclusion_reason = require_string(rec, "exclusion_reason");
  }
  auto aspect = [&](const char* key) {
    if (!rec.contains(key) || rec.at(key).is_null()) {
      if (r.valid) throw Error(std::string("missing field '") + key + "'");
      return 0;
    }
    return static_cast<int>(require_int(rec, key));
  };
  r.image_text = aspect("image_text");
  r.visual_desc = aspect("visual_desc");
  r.takeaway = aspect("takeaway");
  r.helpfulness = aspect("helpfulness");
  r.validate();
  return r;
}

Json ranking_to_json(const RankingRecord& r) {
  return {{"figure_id", r.figure_id},
          {"annotator_id", r.annotator_id},
          {"ranking", r.ranking}};
}

RankingRecord ranking_from_json(const Json& rec) {
  RankingRecord r;
  r.figure_id = require_string(rec, "figure_id");
  r.annotator_id = require_string(rec, "annotator_id");
  if (!rec.contains("ranking") || !rec.at("ranking").is_array()) {
    throw Error("missing array field 'ranking'");
  }
  r.ranking = rec.at("ranking").get<std::vector<std::string>>();
  if (r.ranking.size() < 2) throw Error("ranking needs at least 2 systems");
  return r;
}

Json vote_to_json(const VoteRecord& v) {
  return {{"figure_id", v.figure_id},
          {"worker_id", v.worker_id},
          {"worst_system_id", v.worst_system_id}};
}

VoteRecord vote_from_json(const Json& rec) {
  return {require_string(rec, "figure_id"), require_string(rec, "worker_id"),
          require_string(rec, "worst_system_id")};
}

std::vector<AspectRating> read_ratings(const std::filesystem::path& path) {
  std::vector<AspectRating> out;
  for_each_jsonl(path, [&](const Json& rec, std::size_t) {
    out.push_back(rating_from_json(rec));
  });
  return out;
}

std::vector<RankingRecord> read_rankings(const std::filesystem::path& path) {
  std::vector<RankingRecord> out;
  for_each_jsonl(path, [&](const Json& rec, std::size_t) {
    out.push_back(ranking_from_json(rec));
  });
  return out;
}

std::vector<VoteRecord> read_votes(const std::filesystem::path& path) {
  std::vector<VoteRecord> out;
  for_each_jsonl(path, [&](const Json& rec, std::size_t) {
    out.push_back(vote_from_json(rec));
  });
  return out;
}

}  // namespace figcap
