// Copyright 2026 The PPBO Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppbo/http_api.hpp"

#include <charconv>
#include <regex>

#include <httplib.h>

#include "ppbo/errors.hpp"

namespace ppbo {

namespace {

using nlohmann::json;

ApiResponse reply(int status, const json& body) { return {status, body.dump()}; }

ApiResponse error_reply(int status, const std::string& kind,
                        const std::string& message,
                        const std::string& field = "") {
  json body = {{"error", kind}, {"message", message}};
  if (!field.empty()) body["field"] = field;
  return reply(status, body);
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw ValidationError("body", std::string("malformed JSON: ") + e.what());
  }
}

int parse_resolution(const std::map<std::string, std::string>& params) {
  auto it = params.find("resolution");
  if (it == params.end()) return 101;
  int value = 0;
  const char* first = it->second.data();
  const char* last = first + it->second.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ValidationError("resolution", "resolution must be an integer");
  }
  return value;
}

ApiResponse route(SessionStore& store, const ApiRequest& req) {
  static const std::regex kSession(R"(^/sessions/([A-Za-z0-9_-]+)(/[a-z]+)?/?$)");
  if (req.path == "/sessions" || req.path == "/sessions/") {
    if (req.method != "POST") return error_reply(405, "method", "use POST");
    json body = parse_body(req.body);
    std::string token;
    if (body.is_object() && body.contains("client_token")) {
      if (!body.at("client_token").is_string()) {
        throw ValidationError("client_token", "client_token must be a string");
      }
      token = body.at("client_token").get<std::string>();
    }
    auto state = store.create(session_config_from_json(body), token);
    return reply(201, state_view(*state));
  }

  std::smatch m;
  if (!std::regex_match(req.path, m, kSession)) {
    return error_reply(404, "not_found", "no route for " + req.path);
  }
  const std::string id = m[1];
  const std::string action = m[2];
  if (action.empty()) {
    if (req.method != "GET") return error_reply(405, "method", "use GET");
    return reply(200, state_view(*store.get(id)));
  }
  if (action == "/query") {
    if (req.method != "GET") return error_reply(405, "method", "use GET");
    return reply(200, query_view(*store.get(id)));
  }
  if (action == "/slice") {
    if (req.method != "GET") return error_reply(405, "method", "use GET");
    auto state = store.get(id);
    return reply(200, slice_view(*state, compute_slice(*state, parse_resolution(req.params))));
  }
  if (action == "/feedback") {
    if (req.method != "POST") return error_reply(405, "method", "use POST");
    json body = parse_body(req.body);
    if (!body.is_object() || !body.contains("alpha") || !body.at("alpha").is_number()) {
      throw ValidationError("alpha", "alpha must be a number");
    }
    if (!body.contains("token") || !body.at("token").is_string()) {
      throw ValidationError("token", "token must be a string");
    }
    auto state = store.submit_feedback(id, body.at("alpha").get<double>(),
                                       body.at("token").get<std::string>());
    return reply(200, state_view(*state));
  }
  return error_reply(404, "not_found", "no route for " + req.path);
}

}  // namespace

ApiResponse handle_request(SessionStore& store, const ApiRequest& request) {
  try {
    return route(store, request);
  } catch (const ValidationError& e) {
    return error_reply(400, "validation", e.what(), e.field());
  } catch (const NotFoundError& e) {
    return error_reply(404, "not_found", e.what());
  } catch (const ConflictError& e) {
    return error_reply(409, "conflict", e.what());
  } catch (const Error& e) {
    return error_reply(500, "internal", e.what());
  }
}

struct HttpServer::Impl {
  explicit Impl(SessionStore& s) : store(s) {}

  SessionStore& store;
  httplib::Server server;
};

HttpServer::HttpServer(SessionStore& store) : impl_(std::make_unique<Impl>(store)) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest api{req.method, req.path, {}, req.body};
    for (const auto& [key, value] : req.params) api.params[key] = value;
    ApiResponse out = handle_request(impl_->store, api);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  impl_->server.Get(R"(/sessions.*)", forward);
  impl_->server.Post(R"(/sessions.*)", forward);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace ppbo
