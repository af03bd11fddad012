#include <httplib.h>

#include <algorithm>

#include "figcap/annotate.hpp"

namespace figcap {
namespace {

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs `fn`, mapping failures to JSON error responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const RequestError& e) {
    reply(res, e.status(), {{"error", e.what()}});
  } catch (const Json::exception& e) {
    reply(res, 400, {{"error", std::string("bad request body: ") + e.what()}});
  } catch (const Error& e) {
    reply(res, 400, {{"error", e.what()}});
  } catch (const std::exception& e) {
    reply(res, 500, {{"error", e.what()}});
  }
}

Json parse_body(const httplib::Request& req) {
  Json body = Json::parse(req.body);
  if (!body.is_object()) throw RequestError(400, "request body must be an object");
  return body;
}

std::filesystem::path resolve_task_file(const HttpOptions& options,
                                        const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path root = fs::weakly_canonical(
      options.task_root.empty() ? fs::current_path() : options.task_root);
  const fs::path path = fs::weakly_canonical(root / name);
  auto [r, p] = std::mismatch(root.begin(), root.end(), path.begin(), path.end());
  if (r != root.end()) {
    throw RequestError(403, "task_file must stay inside the task directory");
  }
  if (!fs::is_regular_file(path)) {
    throw RequestError(404, "task file '" + name + "' not found");
  }
  return path;
}

std::string jsonl_text(const std::vector<Json>& records) {
  std::string out;
  for (const Json& r : records) out += r.dump() + "\n";
  return out;
}

}  // namespace

void mount_annotation_api(httplib::Server& server, AnnotationService& service,
                          const HttpOptions& options) {
  server.Post("/sessions", [&service, options](const httplib::Request& req,
                                               httplib::Response& res) {
    guarded(res, [&] {
      const Json body = parse_body(req);
      const std::string task_file = require_string(body, "task_file");
      const auto path = resolve_task_file(options, task_file);
      std::vector<AnnotationTask> tasks;
      try {
        tasks = load_tasks(path);
      } catch (const Error& e) {
        throw RequestError(400, e.what());
      }
      const auto seed = body.contains("seed") ? body.at("seed").get<std::uint64_t>() : 0;
      const std::string id = service.create_session(
          std::move(tasks), require_string(body, "annotator_id"), seed, task_file);
      reply(res, 200, {{"session_id", id}});
    });
  });

  server.Get("/sessions/:id", [&service](const httplib::Request& req,
                                         httplib::Response& res) {
    guarded(res, [&] {
      const SessionSummary s = service.session(req.path_params.at("id"));
      reply(res, 200,
            {{"session_id", s.session_id}, {"annotator_id", s.annotator_id},
             {"task_count", s.task_count}, {"cursor", s.cursor}});
    });
  });

  server.Get("/sessions/:id/next", [&service](const httplib::Request& req,
                                              httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.path_params.at("id");
      const SessionSummary s = service.session(id);
      const auto task = service.next_task(id);
      if (!task) {
        reply(res, 200, {{"done", true}});
        return;
      }
      reply(res, 200, task_payload(*task, s.cursor, s.task_count));
    });
  });

  server.Post("/sessions/:id/ratings", [&service](const httplib::Request& req,
                                                  httplib::Response& res) {
    guarded(res, [&] {
      Json body = parse_body(req);
      const std::string task_id = require_string(body, "task_id");
      body["figure_id"] = "pending";
      AspectRating rating;
      try {
        rating = rating_from_json(body);
      } catch (const Error& e) {
        throw RequestError(400, e.what());
      }
      service.submit_rating(req.path_params.at("id"), task_id, rating);
      reply(res, 200, {{"ok", true}});
    });
  });

  server.Post("/sessions/:id/rankings", [&service](const httplib::Request& req,
                                                   httplib::Response& res) {
    guarded(res, [&] {
      const Json body = parse_body(req);
      service.submit_ranking(req.path_params.at("id"),
                             require_string(body, "task_id"),
                             body.at("order").get<std::vector<std::string>>());
      reply(res, 200, {{"ok", true}});
    });
  });

  server.Post("/sessions/:id/votes", [&service](const httplib::Request& req,
                                                httplib::Response& res) {
    guarded(res, [&] {
      const Json body = parse_body(req);
      service.submit_vote(req.path_params.at("id"), require_string(body, "task_id"),
                          require_string(body, "worst"));
      reply(res, 200, {{"ok", true}});
    });
  });

  server.Get("/export", [&service](const httplib::Request&,
                                   httplib::Response& res) {
    guarded(res, [&] {
      const ExportBundle b = service.export_annotations();
      reply(res, 200,
            {{"files",
              {{"ratings.jsonl", jsonl_text(b.ratings)},
               {"rankings.jsonl", jsonl_text(b.rankings)},
               {"votes.jsonl", jsonl_text(b.votes)},
               {"audit.jsonl", jsonl_text(b.audit)}}}});
    });
  });

  if (!options.image_dir.empty()) {
    server.set_mount_point("/images", options.image_dir.string());
  }
  if (!options.static_dir.empty()) {
    server.set_mount_point("/", options.static_dir.string());
  }
}

int run_annotation_server(AnnotationService& service, const std::string& host,
                          int port, const HttpOptions& options) {
  httplib::Server server;
  mount_annotation_api(server, service, options);
  if (!server.listen(host, port)) {
    std::fprintf(stderr, "cannot listen on %s:%d\n", host.c_str(), port);
    return 1;
  }
  return 0;
}

}  // namespace figcap
