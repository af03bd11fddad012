#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "figcap/analysis.hpp"
#include "figcap/error.hpp"
#include "figcap/jsonl.hpp"

namespace httplib {
class Server;
}

namespace figcap {

// A rejected request; `status` is the HTTP status the service answers with.
class RequestError : public Error {
 public:
  RequestError(int status, const std::string& what)
      : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

enum class TaskMode { kRate, kRank, kWorstVote };

std::string_view to_string(TaskMode mode);
TaskMode parse_task_mode(std::string_view name);

struct Candidate {
  std::string candidate_id;  // opaque, assigned by the service
  std::string system_id;     // never serialized into a task payload
  std::string text;
};

struct AnnotationTask {
  std::string task_id;
  TaskMode mode = TaskMode::kRank;
  std::string figure_id;
  std::string image;  // path or URL of the figure image
  std::string title;
  std::string abstract;
  std::string paper_url;  // shown in rate mode only
  std::vector<Candidate> candidates;

  void validate() const;
};

// Task file: one JSON object per line,
// {task_id, mode, figure_id, image, title, abstract, paper_url?,
//  candidates: [{system_id, text}]}.
std::vector<AnnotationTask> load_tasks(const std::filesystem::path& path);
AnnotationTask task_from_json(const Json& record);
Json task_to_json(const AnnotationTask& task);  // full, including system ids

// What a judge sees: candidates in display order, no system identifiers,
// and no paper link outside rate mode.
Json task_payload(const AnnotationTask& task, std::size_t position,
                  std::size_t total);

// Candidate display order and ids for one task: a pure function of
// (seed, task_id).
AnnotationTask shuffle_candidates(const AnnotationTask& task,
                                  std::uint64_t seed);

struct SessionSummary {
  std::string session_id;
  std::string annotator_id;
  std::uint64_t seed = 0;
  std::size_t task_count = 0;
  std::size_t cursor = 0;
};

struct ExportBundle {
  std::vector<Json> ratings;
  std::vector<Json> rankings;
  std::vector<Json> votes;
  std::vector<Json> audit;  // superseded submissions, oldest first
};

// Annotation sessions over an append-only log (`<dir>/annotations.jsonl`).
// Every accepted write is flushed before it is acknowledged; opening a store
// replays the log to rebuild the in-memory index. Writers are serialized;
// readers work on an immutable snapshot.
class AnnotationService {
 public:
  explicit AnnotationService(std::filesystem::path store_dir);
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  // One session per annotator: repeating the same (annotator, task source,
  // seed) returns the existing session, anything else for that annotator
  // is a conflict.
  std::string create_session(std::vector<AnnotationTask> tasks,
                             const std::string& annotator_id,
                             std::uint64_t seed,
                             const std::string& task_source = "");

  // Task at the cursor (display order), or nullopt when the session is done.
  std::optional<AnnotationTask> next_task(const std::string& session_id) const;
  SessionSummary session(const std::string& session_id) const;
  std::vector<SessionSummary> sessions() const;

  void submit_rating(const std::string& session_id, const std::string& task_id,
                     AspectRating rating);
  void submit_ranking(const std::string& session_id,
                      const std::string& task_id,
                      const std::vector<std::string>& order);
  void submit_vote(const std::string& session_id, const std::string& task_id,
                   const std::string& worst_candidate_id);

  ExportBundle export_annotations() const;
  // Writes ratings.jsonl, rankings.jsonl, votes.jsonl and audit.jsonl.
  void write_export(const std::filesystem::path& dir) const;

  const std::filesystem::path& store_dir() const { return dir_; }

 private:
  struct State;

  std::shared_ptr<const State> snapshot() const;
  void commit(std::shared_ptr<const State> next, const Json& record);
  void apply(State& state, const Json& record) const;
  void submit(const std::string& session_id, const std::string& task_id,
              TaskMode expected, Json payload);

  std::filesystem::path dir_;
  std::filesystem::path log_path_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const State> state_;
  std::mutex write_mutex_;
};

struct HttpOptions {
  std::filesystem::path task_root;   // task_file paths resolve against this
  std::filesystem::path static_dir;  // web UI bundle, optional
  std::filesystem::path image_dir;   // served under /images, optional
};

// Registers the JSON API on `server`:
//   POST /sessions, GET /sessions/{id}/next, POST /sessions/{id}/ratings,
//   POST /sessions/{id}/rankings, POST /sessions/{id}/votes, GET /export
void mount_annotation_api(httplib::Server& server, AnnotationService& service,
                          const HttpOptions& options);

// Blocks serving on host:port until the process is stopped.
int run_annotation_server(AnnotationService& service, const std::string& host,
                          int port, const HttpOptions& options);

}  // namespace figcap
