// Copyright 2026 The ForgeSpark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "forgespark/session/server.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>
#include <sys/socket.h>

#include <sstream>

#include "forgespark/coverage/report.hpp"

namespace forgespark::session {

using nlohmann::json;
namespace fs = std::filesystem;

const char* const kFallbackPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>ForgeSpark</title></head>\n"
    "<body><h1>ForgeSpark</h1><p>The review UI bundle is not installed. The JSON API is available under "
    "<code>/api</code>.</p></body></html>\n";

namespace {

int http_status(ServiceError::Code code) {
  switch (code) {
    case ServiceError::Code::NotFound:
      return 404;
    case ServiceError::Code::WrongPhase:
      return 409;
    case ServiceError::Code::InvalidRequest:
      return 400;
    case ServiceError::Code::Failed:
      return 422;
  }
  return 500;
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  send_json(res, {{"error", {{"code", code}, {"message", message}}}}, status);
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw ServiceError(ServiceError::Code::InvalidRequest, "request body must be a JSON object");
  }
  return body;
}

template <typename T>
T field(const json& body, const char* key) {
  if (!body.contains(key)) throw ServiceError(ServiceError::Code::InvalidRequest, std::string("missing '") + key + "'");
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw ServiceError(ServiceError::Code::InvalidRequest, std::string("bad '") + key + "'");
  }
}

ApplyDestination destination_of(const json& d) {
  const std::string kind = field<std::string>(d, "kind");
  if (kind == "new") return NewFile{d.value("directory", ""), field<std::string>(d, "name")};
  if (kind == "existing") return ExistingFile{field<std::string>(d, "path")};
  throw ServiceError(ServiceError::Code::InvalidRequest, "destination kind must be 'new' or 'existing'");
}

std::set<std::string> split_ids(const std::string& text) {
  std::set<std::string> out;
  std::stringstream in(text);
  std::string id;
  while (std::getline(in, id, ',')) {
    if (!id.empty()) out.insert(id);
  }
  return out;
}

}  // namespace

class HttpServer::Impl {
 public:
  Impl(SessionService& service, fs::path ui_dir) : service_(service), ui_dir_(std::move(ui_dir)) { routes(); }

  httplib::Server server;

 private:
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  // Maps service errors and malformed input to JSON error responses.
  Handler guarded(Handler inner) {
    return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
      try {
        inner(req, res);
      } catch (const ServiceError& e) {
        send_error(res, http_status(e.code()), e.code_name(), e.what());
      } catch (const std::exception& e) {
        spdlog::error("{} {}: {}", req.method, req.path, e.what());
        send_error(res, 500, "internal", e.what());
      }
    };
  }

  void routes() {
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });

    const std::string sid = R"(/api/sessions/([^/]+))";
    const std::string tid = sid + R"(/tests/([^/]+))";

    server.Get("/api/sessions", guarded([this](const httplib::Request&, httplib::Response& res) {
                 json out = json::array();
                 for (const auto& s : service_.list()) out.push_back(to_json(s));
                 send_json(res, out);
               }));

    server.Post("/api/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  json body = body_of(req);
                  UnitSpec unit;
                  unit.file = field<std::string>(body, "file");
                  if (body.contains("function") && !body["function"].is_null()) {
                    unit.function = field<std::string>(body, "function");
                  }
                  if (body.contains("line") && !body["line"].is_null()) unit.line = field<int>(body, "line");
                  auto technique = parse_technique(field<std::string>(body, "technique"));
                  if (!technique) {
                    throw ServiceError(ServiceError::Code::InvalidRequest, "technique must be 'sbst' or 'llm'");
                  }
                  std::optional<fs::path> project;
                  if (body.contains("project")) project = fs::path(field<std::string>(body, "project"));
                  std::string id =
                      service_.create_session(unit, *technique, body.value("config", json::object()), false, project);
                  send_json(res, to_json(service_.info(id)), 201);
                }));

    server.Get(sid, guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, to_json(service_.info(req.matches[1])));
               }));

    server.Get(sid + "/tests", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 json out = json::array();
                 for (const auto& t : service_.tests(req.matches[1])) out.push_back(to_json(t));
                 send_json(res, out);
               }));

    server.Get(tid, guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, to_json(service_.test(req.matches[1], req.matches[2])));
               }));

    server.Delete(tid, guarded([this](const httplib::Request& req, httplib::Response& res) {
                    service_.delete_test(req.matches[1], req.matches[2]);
                    send_json(res, {{"deleted", req.matches[2].str()}, {"totals", totals(req.matches[1])}});
                  }));

    server.Post(tid + "/run", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  json body = body_of(req);
                  std::optional<std::string> code;
                  if (body.contains("code") && !body["code"].is_null()) code = field<std::string>(body, "code");
                  const std::string id = req.matches[1], t = req.matches[2];
                  TestEntry entry = service_.run_test(id, t, code);
                  send_json(res, {{"test", to_json(entry)},
                                  {"covered_lines", service_.covered_lines(id, t)},
                                  {"totals", totals(id)}});
                }));

    server.Post(tid + "/reset", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const std::string to = field<std::string>(body_of(req), "to");
                  ResetTarget target;
                  if (to == "initial") {
                    target = ResetTarget::Initial;
                  } else if (to == "last_run") {
                    target = ResetTarget::LastRun;
                  } else {
                    throw ServiceError(ServiceError::Code::InvalidRequest, "to must be 'initial' or 'last_run'");
                  }
                  send_json(res, to_json(service_.reset_test(req.matches[1], req.matches[2], target)));
                }));

    server.Post(tid + "/feedback", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const std::string instruction = field<std::string>(body_of(req), "instruction");
                  std::size_t index = service_.llm_feedback(req.matches[1], req.matches[2], instruction);
                  send_json(res, {{"version", index}, {"test", to_json(service_.test(req.matches[1], req.matches[2]))}});
                }));

    server.Post(tid + "/flags", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  json body = body_of(req);
                  std::optional<bool> selected;
                  std::optional<Liked> liked;
                  if (body.contains("selected")) selected = field<bool>(body, "selected");
                  if (body.contains("liked")) {
                    liked = parse_liked(field<std::string>(body, "liked"));
                    if (!liked) {
                      throw ServiceError(ServiceError::Code::InvalidRequest,
                                         "liked must be 'liked', 'disliked' or 'neutral'");
                    }
                  }
                  TestEntry entry = service_.set_flags(req.matches[1], req.matches[2], selected, liked);
                  send_json(res, {{"test", to_json(entry)}, {"totals", totals(req.matches[1])}});
                }));

    server.Get(tid + "/versions", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 TestEntry entry = service_.test(req.matches[1], req.matches[2]);
                 send_json(res, {{"versions", entry.versions}, {"active", entry.active_version}});
               }));

    server.Post(tid + "/versions/active", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  auto index = field<std::size_t>(body_of(req), "index");
                  send_json(res, to_json(service_.set_active_version(req.matches[1], req.matches[2], index)));
                }));

    server.Post(sid + "/bulk", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  auto action = parse_bulk_action(field<std::string>(body_of(req), "action"));
                  if (!action) {
                    throw ServiceError(ServiceError::Code::InvalidRequest,
                                       "action must be select_all, unselect_all or delete_all");
                  }
                  service_.bulk(req.matches[1], *action);
                  send_json(res, {{"tests", service_.tests(req.matches[1]).size()}, {"totals", totals(req.matches[1])}});
                }));

    server.Get(sid + "/coverage", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 std::optional<std::set<std::string>> selection;
                 if (req.has_param("selected")) selection = split_ids(req.get_param_value("selected"));
                 send_json(res, coverage::metrics_json(service_.totals(req.matches[1], selection)));
               }));

    server.Get(sid + "/lines", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, service_.lines(req.matches[1]));
               }));

    server.Get(sid + "/report", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, service_.report(req.matches[1]));
               }));

    server.Post(sid + "/apply", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  json body = body_of(req);
                  ApplyDestination dest = destination_of(field<json>(body, "destination"));
                  std::optional<std::vector<std::string>> selection;
                  if (body.contains("tests")) selection = field<std::vector<std::string>>(body, "tests");
                  ApplyResult result = service_.apply(req.matches[1], selection, dest);
                  send_json(res, {{"written", result.written.string()}, {"added", result.added},
                                  {"renamed", result.renamed}});
                }));

    server.Get("/api/.*", [](const httplib::Request&, httplib::Response& res) {
      send_error(res, 404, "not_found", "no such endpoint");
    });

    std::error_code ec;
    if (!ui_dir_.empty() && fs::is_regular_file(ui_dir_ / "index.html", ec)) {
      server.set_mount_point("/", ui_dir_.string());
    } else {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kFallbackPage, "text/html; charset=utf-8");
      });
    }
  }

  json totals(const std::string& id) { return coverage::metrics_json(service_.totals(id)); }

  SessionService& service_;
  fs::path ui_dir_;
};

HttpServer::HttpServer(SessionService& service, fs::path ui_dir)
    : impl_(std::make_unique<Impl>(service, std::move(ui_dir))) {}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind(int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port("127.0.0.1");
    return port_ > 0;
  }
  if (!impl_->server.bind_to_port("127.0.0.1", port)) return false;
  port_ = port;
  return true;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace forgespark::session
