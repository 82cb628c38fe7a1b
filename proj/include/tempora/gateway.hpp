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

#ifndef TEMPORA_GATEWAY_HPP
#define TEMPORA_GATEWAY_HPP

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tempora/digest.hpp"
#include "tempora/errors.hpp"

// Uniform access to the model roles behind memorization, retrieval, program
// generation, and answer selection. Three interchangeable backends: live HTTP
// (see gateway_http.hpp), record (live + persist), and replay (fixtures
// only). Replay runs are bit-deterministic.

namespace tempora {

enum class Role { mem, retrieval, code, select, extract, link, create };

inline const char* to_string(Role r) {
  switch (r) {
    case Role::mem: return "mem";
    case Role::retrieval: return "retrieval";
    case Role::code: return "code";
    case Role::select: return "select";
    case Role::extract: return "extract";
    case Role::link: return "link";
    case Role::create: return "create";
  }
  return "?";
}

inline Role role_from_string(const std::string& s) {
  for (Role r : {Role::mem, Role::retrieval, Role::code, Role::select,
                 Role::extract, Role::link, Role::create}) {
    if (s == to_string(r)) return r;
  }
  throw FormatError("unknown role tag '" + s + "'");
}

struct Message {
  std::string speaker;  // "system" | "user" | "assistant"
  std::string text;

  bool operator==(const Message&) const = default;
};

struct Decoding {
  double temperature = 0.0;
  int max_tokens = 1024;

  bool operator==(const Decoding&) const = default;
};

struct ChatRequest {
  Role role = Role::mem;
  std::vector<Message> messages;
  Decoding decoding;
};

inline nlohmann::json to_json(const ChatRequest& req) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : req.messages) {
    msgs.push_back({{"speaker", m.speaker}, {"text", m.text}});
  }
  return {{"role_tag", to_string(req.role)},
          {"messages", msgs},
          {"decoding",
           {{"temperature", req.decoding.temperature},
            {"max_tokens", req.decoding.max_tokens}}}};
}

inline ChatRequest request_from_json(const nlohmann::json& j) {
  ChatRequest req;
  req.role = role_from_string(j.at("role_tag").get<std::string>());
  for (const auto& m : j.at("messages")) {
    req.messages.push_back(Message{m.at("speaker").get<std::string>(),
                                   m.at("text").get<std::string>()});
  }
  const auto& d = j.at("decoding");
  req.decoding.temperature = d.at("temperature").get<double>();
  req.decoding.max_tokens = d.at("max_tokens").get<int>();
  return req;
}

// Content-addressed key: a digest of the canonical serialization, so field
// order and whitespace outside message text cannot change it.
inline std::string fixture_key(const ChatRequest& req) {
  return digest_hex(to_json(req).dump());
}

struct Fixture {
  std::string key;
  ChatRequest request;
  std::string response;
  struct Meta {
    std::string backend;
    std::string recorded_at;
  } meta;
};

inline nlohmann::json to_json(const Fixture& f) {
  return {{"key", f.key},
          {"request", to_json(f.request)},
          {"response", f.response},
          {"meta",
           {{"backend", f.meta.backend}, {"recorded_at", f.meta.recorded_at}}}};
}

inline Fixture fixture_from_json(const nlohmann::json& j) {
  Fixture f;
  f.key = j.at("key").get<std::string>();
  f.request = request_from_json(j.at("request"));
  f.response = j.at("response").get<std::string>();
  if (j.contains("meta")) {
    f.meta.backend = j["meta"].value("backend", std::string());
    f.meta.recorded_at = j["meta"].value("recorded_at", std::string());
  }
  return f;
}

// One JSON file per key, written via temp-file + rename so concurrent
// recorders never expose partial fixtures.
class FixtureStore {
 public:
  explicit FixtureStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<Fixture> load(const std::string& key) const {
    const auto path = dir_ / (key + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
      return fixture_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& ex) {
      throw FormatError(path.string() + ": " + ex.what());
    }
  }

  void save(const Fixture& f) const {
    std::filesystem::create_directories(dir_);
    const auto final_path = dir_ / (f.key + ".json");
    const auto tmp_path = dir_ / (f.key + ".tmp");
    {
      std::ofstream out(tmp_path, std::ios::binary);
      if (!out) throw DataError("cannot write " + tmp_path.string());
      out << to_json(f).dump(2) << "\n";
    }
    std::filesystem::rename(tmp_path, final_path);
  }

 private:
  std::filesystem::path dir_;
};

class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string complete(const ChatRequest& req) = 0;
  virtual std::string name() const = 0;
};

// Deterministic canned model, used by tests and by the fixture recorder.
class ScriptedBackend : public Backend {
 public:
  using Fn = std::function<std::string(const ChatRequest&)>;

  explicit ScriptedBackend(Fn fn) : fn_(std::move(fn)) {}

  std::string complete(const ChatRequest& req) override { return fn_(req); }
  std::string name() const override { return "scripted"; }

 private:
  Fn fn_;
};

class ReplayBackend : public Backend {
 public:
  explicit ReplayBackend(FixtureStore store) : store_(std::move(store)) {}

  std::string complete(const ChatRequest& req) override {
    const std::string key = fixture_key(req);
    if (auto f = store_.load(key)) return f->response;
    throw MissingFixtureError("no fixture for role '" +
                              std::string(to_string(req.role)) + "' (key " +
                              key + ") in " + store_.dir().string());
  }
  std::string name() const override { return "replay"; }

 private:
  FixtureStore store_;
};

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Completes through an inner backend and persists every exchange.
class RecordBackend : public Backend {
 public:
  RecordBackend(std::unique_ptr<Backend> inner, FixtureStore store)
      : inner_(std::move(inner)), store_(std::move(store)) {}

  std::string complete(const ChatRequest& req) override {
    std::string response = inner_->complete(req);
    Fixture f;
    f.key = fixture_key(req);
    f.request = req;
    f.response = response;
    f.meta.backend = inner_->name();
    f.meta.recorded_at = utc_timestamp();
    store_.save(f);
    return response;
  }
  std::string name() const override { return "record"; }

 private:
  std::unique_ptr<Backend> inner_;
  FixtureStore store_;
};

}  // namespace tempora

#endif  // TEMPORA_GATEWAY_HPP
