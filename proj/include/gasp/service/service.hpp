#pragma once

// HTTP/JSON facade over the advisor, independent of any HTTP library.
//
//   POST /sessions                       profile facts -> 201 {id, profile}
//   GET  /sessions/{id}/profile
//   GET  /sessions/{id}/recommendations
//   POST /sessions/{id}/check            {treatment, cor_class}
//   POST /sessions/{id}/evidence         {confirm: [atom, ...]}
//   GET  /vocabulary
//   GET  /health
//
// Every response body is a JSON object with a `timings_ms` member.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "gasp/advisor/compliance.hpp"

namespace gasp::service {

struct Request {
  std::string method;
  std::string path;
  std::string body;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  advisor::AdvisorOptions advisor;
  /// Append-only JSON-lines log of profile versions, replayed at startup.
  std::optional<std::filesystem::path> persistence;
  /// Reports kept per session.
  std::size_t history_limit = 100;
};

class AdvisoryService {
 public:
  explicit AdvisoryService(Program kb = advisor::kb_rules(), ServiceOptions options = {});
  ~AdvisoryService();

  /// Thread-safe. Mutations of one session are serialized.
  Response handle(const Request& request);

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gasp::service
