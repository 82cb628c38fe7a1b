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

#ifndef TEMPORA_ERRORS_HPP
#define TEMPORA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tempora {

// Error taxonomy shared by every module. The CLI maps kinds onto exit codes:
// 2 = configuration, 3 = data/content, 4 = gateway/transport, 5 = internal.
enum class ErrorKind {
  format,
  domain,
  contract,
  config,
  data,
  mismatch,
  insufficient_material,
  ambiguity,
  gateway,
  missing_fixture,
  transport,
  auth,
  internal,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::format: return "FormatError";
    case ErrorKind::domain: return "DomainError";
    case ErrorKind::contract: return "ContractError";
    case ErrorKind::config: return "ConfigError";
    case ErrorKind::data: return "DataError";
    case ErrorKind::mismatch: return "MismatchError";
    case ErrorKind::insufficient_material: return "InsufficientMaterial";
    case ErrorKind::ambiguity: return "AmbiguityError";
    case ErrorKind::gateway: return "GatewayError";
    case ErrorKind::missing_fixture: return "MissingFixture";
    case ErrorKind::transport: return "TransportError";
    case ErrorKind::auth: return "AuthError";
    case ErrorKind::internal: return "InternalError";
  }
  return "InternalError";
}

inline int error_exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::config:
      return 2;
    case ErrorKind::format:
    case ErrorKind::domain:
    case ErrorKind::contract:
    case ErrorKind::data:
    case ErrorKind::mismatch:
    case ErrorKind::insufficient_material:
    case ErrorKind::ambiguity:
      return 3;
    case ErrorKind::gateway:
    case ErrorKind::missing_fixture:
    case ErrorKind::transport:
    case ErrorKind::auth:
      return 4;
    case ErrorKind::internal:
      return 5;
  }
  return 5;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  const char* kind_name() const { return error_kind_name(kind_); }
  int exit_code() const { return error_exit_code(kind_); }

 private:
  ErrorKind kind_;
};

struct FormatError : Error {
  explicit FormatError(const std::string& m) : Error(ErrorKind::format, m) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error(ErrorKind::domain, m) {}
};
struct ContractError : Error {
  explicit ContractError(const std::string& m) : Error(ErrorKind::contract, m) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(ErrorKind::config, m) {}
};
struct DataError : Error {
  explicit DataError(const std::string& m) : Error(ErrorKind::data, m) {}
};
struct MismatchError : Error {
  explicit MismatchError(const std::string& m) : Error(ErrorKind::mismatch, m) {}
};
struct InsufficientMaterialError : Error {
  explicit InsufficientMaterialError(const std::string& m)
      : Error(ErrorKind::insufficient_material, m) {}
};
struct AmbiguityError : Error {
  explicit AmbiguityError(const std::string& m) : Error(ErrorKind::ambiguity, m) {}
};

struct GatewayError : Error {
  GatewayError(ErrorKind kind, const std::string& m) : Error(kind, m) {}
  explicit GatewayError(const std::string& m) : Error(ErrorKind::gateway, m) {}
};
struct MissingFixtureError : GatewayError {
  explicit MissingFixtureError(const std::string& m)
      : GatewayError(ErrorKind::missing_fixture, m) {}
};
struct TransportError : GatewayError {
  explicit TransportError(const std::string& m)
      : GatewayError(ErrorKind::transport, m) {}
};
struct AuthError : GatewayError {
  explicit AuthError(const std::string& m) : GatewayError(ErrorKind::auth, m) {}
};

}  // namespace tempora

#endif  // TEMPORA_ERRORS_HPP
