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

#include "setproto/interface/service.hpp"

#include <cstdlib>
#include <string>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "setproto/error.hpp"
#include "setproto/explain/explanation.hpp"
#include "setproto/explain/prototypes.hpp"

namespace setproto {
namespace {

ServiceResponse error_response(int status, const std::string& message,
                               nlohmann::json extra = nlohmann::json::object()) {
  extra["error"] = message;
  return {status, extra.dump()};
}

}  // namespace

InferenceService::InferenceService(Checkpoint checkpoint) : checkpoint_(std::move(checkpoint)) {
  skills_body_ = vocabulary_to_json(checkpoint_.vocab).dump();
  prototypes_body_ = checkpoint_.model.config.uses_prototypes()
                         ? export_prototypes(checkpoint_.model, checkpoint_.vocab).dump()
                         : nlohmann::json::array().dump();
}

ServiceResponse InferenceService::health() const { return {200, R"({"status":"ok"})"}; }

ServiceResponse InferenceService::skills() const { return {200, skills_body_}; }

ServiceResponse InferenceService::prototypes() const { return {200, prototypes_body_}; }

ServiceResponse InferenceService::predict(const std::string& body) const {
  try {
    nlohmann::json request;
    try {
      request = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      return error_response(400, std::string("request body is not valid JSON: ") + e.what());
    }
    EncodeOptions options;
    options.require_salary = false;
    const RawPosting posting = parse_posting(request);
    const EncodedSample sample = encode_posting(posting, checkpoint_.vocab, options);
    const Explanation e = explain(checkpoint_.model, sample.input);
    const nlohmann::json reply = {{"salary", e.salary},
                                  {"explanation", to_json(e, checkpoint_.vocab)}};
    return {200, reply.dump()};
  } catch (const UnknownSkillError& e) {
    return error_response(400, e.what(), {{"skill", e.skill()}});
  } catch (const EmptySkillSetError& e) {
    return error_response(422, e.what());
  } catch (const ParseError& e) {
    return error_response(400, e.what());
  } catch (const UnknownValueError& e) {
    return error_response(400, e.what());
  } catch (const std::exception& e) {
    spdlog::error("predict failed: {}", e.what());
    return error_response(500, "internal error");
  }
}

struct HttpServer::Impl {
  httplib::Server server;
};

namespace {

void reply(httplib::Response& res, const ServiceResponse& r) {
  res.status = r.status;
  res.set_content(r.body, "application/json");
}

}  // namespace

HttpServer::HttpServer(const InferenceService& service)
    : impl_(std::make_unique<Impl>()) {
  httplib::Server& s = impl_->server;
  const InferenceService* svc = &service;
  s.Get("/health", [svc](const httplib::Request&, httplib::Response& res) { reply(res, svc->health()); });
  s.Get("/skills", [svc](const httplib::Request&, httplib::Response& res) { reply(res, svc->skills()); });
  s.Get("/prototypes",
        [svc](const httplib::Request&, httplib::Response& res) { reply(res, svc->prototypes()); });
  s.Post("/predict", [svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc->predict(req.body));
  });
  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr) {
    reply(res, error_response(500, "internal error"));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  httplib::Server& s = impl_->server;
  const int bound = port == 0 ? s.bind_to_any_port(host) : (s.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

int resolve_port(std::optional<int> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SETPROTO_PORT"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 0 || v > 65535) throw ConfigError(std::string("invalid SETPROTO_PORT: ") + env);
    return static_cast<int>(v);
  }
  return 8080;
}

}  // namespace setproto
