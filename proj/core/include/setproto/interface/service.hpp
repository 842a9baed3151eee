// Copyright 2026 The setproto Authors
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

#pragma once

#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "setproto/interface/checkpoint.hpp"

namespace setproto {

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Request handlers over an immutable model. Every handler is a pure
/// function of the checkpoint and its argument, so one instance serves
/// concurrent requests.
class InferenceService {
 public:
  explicit InferenceService(Checkpoint checkpoint);

  ServiceResponse health() const;
  ServiceResponse skills() const;
  ServiceResponse prototypes() const;
  /// Body: {"skills": [{"name": ..., "level": ...} | "name", ...],
  ///        "context": {field: value}}. Replies {"salary", "explanation"}.
  /// 400 for malformed requests and unknown skills (the body names the
  /// skill), 422 for an empty skill set, 500 for internal faults.
  ServiceResponse predict(const std::string& body) const;

  const Model& model() const { return checkpoint_.model; }
  const SkillVocabulary& vocab() const { return checkpoint_.vocab; }

 private:
  Checkpoint checkpoint_;
  std::string skills_body_;
  std::string prototypes_body_;
};

/// HTTP front end: GET /health, GET /skills, GET /prototypes, POST /predict.
class HttpServer {
 public:
  explicit HttpServer(const InferenceService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the listening socket; port 0 picks a free port. Returns the
  /// bound port. Throws Error when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  void listen();
  void stop();
  /// Blocks until the server accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Explicit flag, else the SETPROTO_PORT environment variable, else 8080.
int resolve_port(std::optional<int> flag);

}  // namespace setproto
