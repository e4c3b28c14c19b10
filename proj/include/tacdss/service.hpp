#pragma once

// Read-only JSON-over-HTTP facade over one loaded model.
//
//   POST /api/infer    {"factors": [fuel, time, weapon, danger],
//                       "units": "normalized" | "raw"}
//   GET  /api/system   model document
//   GET  /api/rules    rules with linguistic labels
//   GET  /api/presets  reference scenarios

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "tacdss/fuzzy.hpp"

namespace httplib {
class Server;
}

namespace tacdss::service {

struct Response {
  int status = 200;
  std::string body;  // JSON
};

/// Request handlers without any transport. Safe to call concurrently.
class InferenceService {
 public:
  explicit InferenceService(FuzzySystem model);

  Response infer(std::string_view body) const;
  Response system() const;
  Response rules() const;
  Response presets() const;

  const FuzzySystem& model() const noexcept { return model_; }

 private:
  FuzzySystem model_;
  std::string system_body_;
  std::string rules_body_;
  std::string presets_body_;
};

/// "if fuel is half and time is fast ... then score is acceptable"
std::string describe_rule(const FuzzySystem& system, std::size_t rule_index);

/// cpp-httplib server bound to an InferenceService.
class HttpServer {
 public:
  explicit HttpServer(const InferenceService& service,
                      std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port (port 0 picks a free port) and returns the bound port.
  /// Throws IoError when the address is unavailable.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void listen();
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace tacdss::service
