// Copyright 2026 The Tempora Authors.
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

#ifndef TEMPORA_GATEWAY_HTTP_HPP
#define TEMPORA_GATEWAY_HTTP_HPP

#include <chrono>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "httplib.h"
#include "tempora/gateway.hpp"

// Live chat-completion backend. Endpoint and credentials come from the
// environment so replayable run configs never embed secrets:
//   TEMPORA_API_BASE   e.g. http://localhost:8089 or https://api.example.com
//   TEMPORA_API_KEY    bearer token
//   TEMPORA_MODEL      default model name
//   TEMPORA_MODEL_<ROLE> per-role override (MEM, RETRIEVAL, CODE, SELECT,
//                        EXTRACT, LINK, CREATE)

namespace tempora {

struct HttpBackendConfig {
  std::string base_url;
  std::string api_key;
  std::string default_model;
  std::map<Role, std::string> model_per_role;
  std::string path = "/v1/chat/completions";
  int max_retries = 3;             // retries after the first try
  int backoff_initial_ms = 1000;   // doubles per retry
  int rate_limit_per_minute = 0;   // 0 = unlimited
  int timeout_seconds = 120;
};

inline std::string env_or(const char* name, const std::string& fallback = {}) {
  const char* v = std::getenv(name);
  return v != nullptr ? std::string(v) : fallback;
}

inline HttpBackendConfig http_config_from_env() {
  HttpBackendConfig cfg;
  cfg.base_url = env_or("TEMPORA_API_BASE");
  cfg.api_key = env_or("TEMPORA_API_KEY");
  cfg.default_model = env_or("TEMPORA_MODEL", "gpt-4o");
  const std::pair<Role, const char*> vars[] = {
      {Role::mem, "TEMPORA_MODEL_MEM"},
      {Role::retrieval, "TEMPORA_MODEL_RETRIEVAL"},
      {Role::code, "TEMPORA_MODEL_CODE"},
      {Role::select, "TEMPORA_MODEL_SELECT"},
      {Role::extract, "TEMPORA_MODEL_EXTRACT"},
      {Role::link, "TEMPORA_MODEL_LINK"},
      {Role::create, "TEMPORA_MODEL_CREATE"},
  };
  for (const auto& [role, var] : vars) {
    if (std::string v = env_or(var); !v.empty()) cfg.model_per_role[role] = v;
  }
  return cfg;
}

// Blocking token bucket, refilled at requests-per-minute.
class RateLimiter {
 public:
  explicit RateLimiter(int per_minute) : per_minute_(per_minute) {}

  void acquire() {
    if (per_minute_ <= 0) return;
    std::unique_lock<std::mutex> lock(mu_);
    for (;;) {
      refill();
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      lock.unlock();
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
      lock.lock();
    }
  }

 private:
  void refill() {
    const auto now = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    tokens_ = std::min(static_cast<double>(per_minute_),
                       tokens_ + secs * per_minute_ / 60.0);
  }

  int per_minute_;
  double tokens_ = 1.0;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::mutex mu_;
};

class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig cfg)
      : cfg_(std::move(cfg)), limiter_(cfg_.rate_limit_per_minute) {
    if (cfg_.base_url.empty()) {
      throw AuthError("no endpoint configured; set TEMPORA_API_BASE");
    }
    if (cfg_.api_key.empty()) {
      throw AuthError("no API key configured; set TEMPORA_API_KEY");
    }
  }

  std::string complete(const ChatRequest& req) override {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& m : req.messages) {
      messages.push_back({{"role", m.speaker}, {"content", m.text}});
    }
    const nlohmann::json body = {{"model", model_for(req.role)},
                                 {"messages", messages},
                                 {"temperature", req.decoding.temperature},
                                 {"max_tokens", req.decoding.max_tokens}};
    const std::string payload = body.dump();

    std::string last_failure = "no attempt made";
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(
            static_cast<long>(cfg_.backoff_initial_ms) << (attempt - 1)));
      }
      limiter_.acquire();
      httplib::Client client(cfg_.base_url);
      client.set_connection_timeout(cfg_.timeout_seconds);
      client.set_read_timeout(cfg_.timeout_seconds);
      client.set_bearer_token_auth(cfg_.api_key);
      auto res = client.Post(cfg_.path, payload, "application/json");
      if (!res) {
        last_failure = "connection failure (" + httplib::to_string(res.error()) + ")";
        continue;
      }
      if (res->status == 401 || res->status == 403) {
        throw AuthError("endpoint rejected credentials (HTTP " +
                        std::to_string(res->status) + ")");
      }
      if (res->status == 200) return extract_content(res->body);
      last_failure = "HTTP " + std::to_string(res->status);
      const bool transient =
          res->status == 408 || res->status == 429 || res->status >= 500;
      if (!transient) break;
    }
    throw TransportError("chat completion failed after " +
                         std::to_string(cfg_.max_retries + 1) + " attempts: " +
                         last_failure);
  }

  std::string name() const override { return "live"; }

 private:
  std::string model_for(Role role) const {
    auto it = cfg_.model_per_role.find(role);
    return it != cfg_.model_per_role.end() ? it->second : cfg_.default_model;
  }

  static std::string extract_content(const std::string& body) {
    try {
      const auto j = nlohmann::json::parse(body);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& ex) {
      throw TransportError(std::string("malformed completion response: ") +
                           ex.what());
    }
  }

  HttpBackendConfig cfg_;
  RateLimiter limiter_;
};

enum class BackendKind { live, record, replay };

inline BackendKind backend_kind_from_string(const std::string& s) {
  if (s == "live") return BackendKind::live;
  if (s == "record") return BackendKind::record;
  if (s == "replay") return BackendKind::replay;
  throw ConfigError("unknown backend '" + s + "'");
}

inline const char* to_string(BackendKind k) {
  switch (k) {
    case BackendKind::live: return "live";
    case BackendKind::record: return "record";
    case BackendKind::replay: return "replay";
  }
  return "?";
}

// Builds the backend named in a run config. `fixtures_dir` is required for
// record and replay.
inline std::unique_ptr<Backend> make_backend(BackendKind kind,
                                             const std::string& fixtures_dir,
                                             const HttpBackendConfig& http_cfg) {
  switch (kind) {
    case BackendKind::live:
      return std::make_unique<HttpBackend>(http_cfg);
    case BackendKind::record: {
      if (fixtures_dir.empty()) {
        throw ConfigError("record backend requires a fixtures directory");
      }
      return std::make_unique<RecordBackend>(
          std::make_unique<HttpBackend>(http_cfg), FixtureStore(fixtures_dir));
    }
    case BackendKind::replay:
      if (fixtures_dir.empty()) {
        throw ConfigError("replay backend requires a fixtures directory");
      }
      return std::make_unique<ReplayBackend>(FixtureStore(fixtures_dir));
  }
  throw ConfigError("unknown backend kind");
}

}  // namespace tempora

#endif  // TEMPORA_GATEWAY_HTTP_HPP
