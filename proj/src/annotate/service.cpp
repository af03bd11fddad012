#include <unistd.h>

#include <cstdio>
#include <map>

#include "figcap/annotate.hpp"

namespace figcap {

struct AnnotationService::State {
  struct Session {
    SessionSummary summary;
    std::string task_source;
    std::vector<AnnotationTask> tasks;  // display order already applied
    std::map<std::string, std::size_t> task_index;
    std::set<std::string> submitted;
  };
  struct Entry {
    std::string type;  // rating | ranking | vote
    Json record;       // analysis-format record
    Json log;          // the log line that produced it
  };

  std::map<std::string, Session> sessions;
  std::map<std::string, std::string> session_of_annotator;
  std::vector<Entry> entries;  // first-submission order
  std::map<std::string, std::size_t> entry_index;  // type|session|task
  std::vector<Json> audit;
  std::size_t sequence = 0;
};

namespace {

std::size_t cursor_of(const std::vector<AnnotationTask>& tasks,
                      const std::set<std::string>& submitted) {
  std::size_t i = 0;
  while (i < tasks.size() && submitted.count(tasks[i].task_id)) ++i;
  return i;
}

void append_durably(const std::filesystem::path& path, const std::string& line) {
  std::FILE* f = std::fopen(path.c_str(), "ab");
  if (f == nullptr) throw Error("cannot open " + path.string());
  const bool ok = std::fwrite(line.data(), 1, line.size(), f) == line.size() &&
                  std::fflush(f) == 0 && ::fsync(::fileno(f)) == 0;
  std::fclose(f);
  if (!ok) throw Error("failed writing " + path.string());
}

}  // namespace

AnnotationService::AnnotationService(std::filesystem::path store_dir)
    : dir_(std::move(store_dir)), log_path_(dir_ / "annotations.jsonl") {
  std::filesystem::create_directories(dir_);
  auto state = std::make_shared<State>();
  if (std::filesystem::exists(log_path_)) {
    for_each_jsonl(log_path_, [&](const Json& rec, std::size_t) {
      apply(*state, rec);
    });
  }
  state_ = std::move(state);
}

AnnotationService::~AnnotationService() = default;

std::shared_ptr<const AnnotationService::State> AnnotationService::snapshot()
    const {
  std::lock_guard lock(snapshot_mutex_);
  return state_;
}

void AnnotationService::commit(std::shared_ptr<const State> next,
                               const Json& record) {
  append_durably(log_path_, record.dump() + "\n");
  std::lock_guard lock(snapshot_mutex_);
  state_ = std::move(next);
}

void AnnotationService::apply(State& state, const Json& rec) const {
  const std::string type = require_string(rec, "type");
  if (type == "session") {
    State::Session s;
    s.summary.session_id = require_string(rec, "session_id");
    s.summary.annotator_id = require_string(rec, "annotator_id");
    s.summary.seed = rec.at("seed").get<std::uint64_t>();
    s.task_source = require_string(rec, "task_source");
    for (const Json& t : rec.at("tasks")) {
      AnnotationTask task = task_from_json(t);
      s.task_index.emplace(task.task_id, s.tasks.size());
      s.tasks.push_back(std::move(task));
    }
    s.summary.task_count = s.tasks.size();
    state.session_of_annotator[s.summary.annotator_id] = s.summary.session_id;
    state.sessions[s.summary.session_id] = std::move(s);
    return;
  }
  const std::string session_id = require_string(rec, "session_id");
  const std::string task_id = require_string(rec, "task_id");
  auto it = state.sessions.find(session_id);
  if (it == state.sessions.end()) {
    throw Error("log refers to unknown session '" + session_id + "'");
  }
  State::Session& session = it->second;
  session.submitted.insert(task_id);
  session.summary.cursor = cursor_of(session.tasks, session.submitted);

  const std::string key = type + "|" + session_id + "|" + task_id;
  State::Entry entry{type, rec.at("record"), rec};
  auto [pos, fresh] = state.entry_index.emplace(key, state.entries.size());
  if (fresh) {
    state.entries.push_back(std::move(entry));
  } else {
    state.audit.push_back(state.entries[pos->second].log);
    state.entries[pos->second] = std::move(entry);
  }
  ++state.sequence;
}

std::string AnnotationService::create_session(std::vector<AnnotationTask> tasks,
                                              const std::string& annotator_id,
                                              std::uint64_t seed,
                                              const std::string& task_source) {
  if (annotator_id.empty()) throw RequestError(400, "annotator_id is required");
  if (tasks.empty()) throw RequestError(400, "a session needs at least one task");
  std::set<std::string> ids;
  for (const AnnotationTask& t : tasks) {
    try {
      t.validate();
    } catch (const Error& e) {
      throw RequestError(400, e.what());
    }
    if (!ids.insert(t.task_id).second) {
      throw RequestError(400, "duplicate task_id '" + t.task_id + "'");
    }
  }

  std::lock_guard write(write_mutex_);
  auto current = snapshot();
  auto existing = current->session_of_annotator.find(annotator_id);
  if (existing != current->session_of_annotator.end()) {
    const State::Session& s = current->sessions.at(existing->second);
    bool same = s.summary.seed == seed && s.task_source == task_source &&
                s.tasks.size() == tasks.size();
    for (std::size_t i = 0; same && i < tasks.size(); ++i) {
      same = s.task_index.count(tasks[i].task_id) > 0;
    }
    if (same) return existing->second;
    throw RequestError(409, "annotator '" + annotator_id +
                                "' already has session " + existing->second);
  }

  char id[16];
  std::snprintf(id, sizeof id, "s%04zu", current->sessions.size() + 1);
  Json task_list = Json::array();
  for (const AnnotationTask& t : tasks) {
    task_list.push_back(task_to_json(shuffle_candidates(t, seed)));
  }
  Json record = {{"type", "session"},          {"session_id", id},
                 {"annotator_id", annotator_id}, {"seed", seed},
                 {"task_source", task_source}, {"tasks", std::move(task_list)}};
  auto next = std::make_shared<State>(*current);
  apply(*next, record);
  commit(std::move(next), record);
  return id;
}

std::optional<AnnotationTask> AnnotationService::next_task(
    const std::string& session_id) const {
  auto state = snapshot();
  auto it = state->sessions.find(session_id);
  if (it == state->sessions.end()) {
    throw RequestError(404, "unknown session '" + session_id + "'");
  }
  const auto& s = it->second;
  if (s.summary.cursor >= s.tasks.size()) return std::nullopt;
  return s.tasks[s.summary.cursor];
}

SessionSummary AnnotationService::session(const std::string& session_id) const {
  auto state = snapshot();
  auto it = state->sessions.find(session_id);
  if (it == state->sessions.end()) {
    throw RequestError(404, "unknown session '" + session_id + "'");
  }
  return it->second.summary;
}

std::vector<SessionSummary> AnnotationService::sessions() const {
  auto state = snapshot();
  std::vector<SessionSummary> out;
  for (const auto& [id, s] : state->sessions) out.push_back(s.summary);
  return out;
}

void AnnotationService::submit(const std::string& session_id,
                               const std::string& task_id, TaskMode expected,
                               Json payload) {
  std::lock_guard write(write_mutex_);
  auto current = snapshot();
  auto it = current->sessions.find(session_id);
  if (it == current->sessions.end()) {
    throw RequestError(404, "unknown session '" + session_id + "'");
  }
  const auto& s = it->second;
  auto t = s.task_index.find(task_id);
  if (t == s.task_index.end()) {
    throw RequestError(404, "task '" + task_id + "' is not in session " + session_id);
  }
  const AnnotationTask& task = s.tasks[t->second];
  if (task.mode != expected) {
    throw RequestError(400, "task '" + task_id + "' is a " +
                                std::string(to_string(task.mode)) + " task");
  }

  Json record;
  const std::string& annotator = s.summary.annotator_id;
  if (expected == TaskMode::kRate) {
    AspectRating rating = rating_from_json(payload);
    rating.figure_id = task.figure_id;
    rating.annotator_id = annotator;
    record = rating_to_json(rating);
  } else if (expected == TaskMode::kRank) {
    const auto order = payload.get<std::vector<std::string>>();
    std::map<std::string, std::string> system_of;
    for (const Candidate& c : task.candidates) system_of[c.candidate_id] = c.system_id;
    if (order.size() != system_of.size()) {
      throw RequestError(400, "ranking must list all " +
                                  std::to_string(system_of.size()) + " candidates");
    }
    RankingRecord ranking{task.figure_id, annotator, {}};
    std::set<std::string> seen;
    for (const std::string& id : order) {
      auto sys = system_of.find(id);
      if (sys == system_of.end()) {
        throw RequestError(400, "unknown candidate '" + id + "'");
      }
      if (!seen.insert(id).second) {
        throw RequestError(400, "candidate '" + id + "' listed twice");
      }
      ranking.ranking.push_back(sys->second);
    }
    record = ranking_to_json(ranking);
  } else {
    const std::string worst = payload.get<std::string>();
    const Candidate* hit = nullptr;
    for (const Candidate& c : task.candidates) {
      if (c.candidate_id == worst) hit = &c;
    }
    if (hit == nullptr) throw RequestError(400, "unknown candidate '" + worst + "'");
    record = vote_to_json({task.figure_id, annotator, hit->system_id});
  }

  const char* type = expected == TaskMode::kRate   ? "rating"
                     : expected == TaskMode::kRank ? "ranking"
                                                   : "vote";
  Json line = {{"type", type},
               {"seq", current->sequence + 1},
               {"session_id", session_id},
               {"task_id", task_id},
               {"record", std::move(record)}};
  auto next = std::make_shared<State>(*current);
  apply(*next, line);
  commit(std::move(next), line);
}

void AnnotationService::submit_rating(const std::string& session_id,
                                      const std::string& task_id,
                                      AspectRating rating) {
  try {
    rating.figure_id = "pending";  // the task supplies the real figure id
    rating.validate();
  } catch (const Error& e) {
    throw RequestError(400, e.what());
  }
  submit(session_id, task_id, TaskMode::kRate, rating_to_json(rating));
}

void AnnotationService::submit_ranking(const std::string& session_id,
                                       const std::string& task_id,
                                       const std::vector<std::string>& order) {
  submit(session_id, task_id, TaskMode::kRank, Json(order));
}

void AnnotationService::submit_vote(const std::string& session_id,
                                    const std::string& task_id,
                                    const std::string& worst_candidate_id) {
  submit(session_id, task_id, TaskMode::kWorstVote, Json(worst_candidate_id));
}

ExportBundle AnnotationService::export_annotations() const {
  auto state = snapshot();
  ExportBundle bundle;
  for (const State::Entry& e : state->entries) {
    if (e.type == "rating") {
      bundle.ratings.push_back(e.record);
    } else if (e.type == "ranking") {
      bundle.rankings.push_back(e.record);
    } else {
      bundle.votes.push_back(e.record);
    }
  }
  bundle.audit = state->audit;
  return bundle;
}

void AnnotationService::write_export(const std::filesystem::path& dir) const {
  const ExportBundle bundle = export_annotations();
  write_jsonl(dir / "ratings.jsonl", bundle.ratings);
  write_jsonl(dir / "rankings.jsonl", bundle.rankings);
  write_jsonl(dir / "votes.jsonl", bundle.votes);
  write_jsonl(dir / "audit.jsonl", bundle.audit);
}

}  // namespace figcap
