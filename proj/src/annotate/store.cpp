#include <cstdio>
#include <set>

#include "figcap/annotate.hpp"
#include "figcap/rng.hpp"

namespace figcap {

std::string_view to_string(TaskMode mode) {
  switch (mode) {
    case TaskMode::kRate: return "rate";
    case TaskMode::kRank: return "rank";
    case TaskMode::kWorstVote: return "worst_vote";
  }
  return "?";
}

TaskMode parse_task_mode(std::string_view name) {
  if (name == "rate") return TaskMode::kRate;
  if (name == "rank") return TaskMode::kRank;
  if (name == "worst_vote") return TaskMode::kWorstVote;
  throw Error("unknown task mode '" + std::string(name) + "'");
}

void AnnotationTask::validate() const {
  if (task_id.empty()) throw Error("task without task_id");
  if (figure_id.empty()) throw Error("task '" + task_id + "' has no figure_id");
  if (mode == TaskMode::kRate && candidates.size() != 1) {
    throw Error("rate task '" + task_id + "' needs exactly 1 candidate");
  }
  if (mode != TaskMode::kRate && candidates.size() < 2) {
    throw Error(std::string(to_string(mode)) + " task '" + task_id +
                "' needs at least 2 candidates");
  }
  std::set<std::string> systems, ids;
  for (const Candidate& c : candidates) {
    if (c.system_id.empty() || c.text.empty()) {
      throw Error("task '" + task_id + "' has a candidate without system_id or text");
    }
    if (!systems.insert(c.system_id).second) {
      throw Error("task '" + task_id + "' repeats system '" + c.system_id + "'");
    }
    if (!c.candidate_id.empty() && !ids.insert(c.candidate_id).second) {
      throw Error("task '" + task_id + "' repeats candidate id");
    }
  }
}

AnnotationTask task_from_json(const Json& rec) {
  AnnotationTask t;
  t.task_id = require_string(rec, "task_id");
  t.mode = parse_task_mode(require_string(rec, "mode"));
  t.figure_id = require_string(rec, "figure_id");
  auto optional = [&](const char* key) {
    return rec.contains(key) && !rec.at(key).is_null() ? require_string(rec, key)
                                                       : std::string();
  };
  t.image = optional("image");
  t.title = optional("title");
  t.abstract = optional("abstract");
  t.paper_url = optional("paper_url");
  if (!rec.contains("candidates") || !rec.at("candidates").is_array()) {
    throw Error("task '" + t.task_id + "' needs a candidates array");
  }
  for (const Json& c : rec.at("candidates")) {
    Candidate cand;
    cand.system_id = require_string(c, "system_id");
    cand.text = require_string(c, "text");
    if (c.contains("candidate_id")) cand.candidate_id = require_string(c, "candidate_id");
    t.candidates.push_back(std::move(cand));
  }
  t.validate();
  return t;
}

Json task_to_json(const AnnotationTask& t) {
  Json candidates = Json::array();
  for (const Candidate& c : t.candidates) {
    Json j = {{"system_id", c.system_id}, {"text", c.text}};
    if (!c.candidate_id.empty()) j["candidate_id"] = c.candidate_id;
    candidates.push_back(std::move(j));
  }
  return {{"task_id", t.task_id},   {"mode", to_string(t.mode)},
          {"figure_id", t.figure_id}, {"image", t.image},
          {"title", t.title},       {"abstract", t.abstract},
          {"paper_url", t.paper_url}, {"candidates", std::move(candidates)}};
}

std::vector<AnnotationTask> load_tasks(const std::filesystem::path& path) {
  std::vector<AnnotationTask> tasks;
  std::set<std::string> ids;
  for_each_jsonl(path, [&](const Json& rec, std::size_t) {
    AnnotationTask t = task_from_json(rec);
    if (!ids.insert(t.task_id).second) {
      throw Error("duplicate task_id '" + t.task_id + "'");
    }
    tasks.push_back(std::move(t));
  });
  if (tasks.empty()) throw Error(path.string() + ": no tasks");
  return tasks;
}

Json task_payload(const AnnotationTask& task, std::size_t position,
                  std::size_t total) {
  Json candidates = Json::array();
  for (const Candidate& c : task.candidates) {
    candidates.push_back({{"candidate_id", c.candidate_id}, {"text", c.text}});
  }
  Json j = {{"task_id", task.task_id},
            {"mode", to_string(task.mode)},
            {"figure_id", task.figure_id},
            {"image", task.image},
            {"title", task.title},
            {"abstract", task.abstract},
            {"candidates", std::move(candidates)},
            {"position", position},
            {"total", total}};
  if (task.mode == TaskMode::kRate && !task.paper_url.empty()) {
    j["paper_url"] = task.paper_url;
  }
  return j;
}

AnnotationTask shuffle_candidates(const AnnotationTask& task,
                                  std::uint64_t seed) {
  AnnotationTask out = task;
  for (std::size_t i = 0; i < out.candidates.size(); ++i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "c%016llx",
                  static_cast<unsigned long long>(
                      derive_seed(seed, task.task_id, 0x500 + i)));
    out.candidates[i].candidate_id = buf;
  }
  Rng rng(derive_seed(seed, task.task_id, 0x400));
  rng.shuffle(out.candidates);
  return out;
}

}  // namespace figcap
