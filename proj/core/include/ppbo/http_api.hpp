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

#pragma once

#include <map>
#include <memory>
#include <string>

#include "ppbo/session.hpp"

namespace ppbo {

struct ApiRequest {
  std::string method;
  std::string path;  // without query string
  std::map<std::string, std::string> params;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

// Routes one request against the store. Errors map to JSON bodies of the form
// {"error": kind, "message": .., "field": ..}: validation 400, unknown session
// 404, lifecycle conflicts 409, unreadable files 500.
//
//   POST /sessions                {config..., "client_token"?}
//   GET  /sessions/{id}
//   GET  /sessions/{id}/query
//   GET  /sessions/{id}/slice?resolution=R
//   POST /sessions/{id}/feedback  {"alpha": a, "token": t}
ApiResponse handle_request(SessionStore& store, const ApiRequest& request);

// HTTP front end over handle_request.
class HttpServer {
 public:
  explicit HttpServer(SessionStore& store);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 binds an ephemeral port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ppbo
