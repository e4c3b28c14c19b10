#include "tacdss/service.hpp"

#include <httplib.h>

#include <array>
#include <cmath>

#include "tacdss/domain.hpp"
#include "tacdss/error.hpp"
#include "tacdss/model_io.hpp"

namespace tacdss::service {

using io::Json;

namespace {

Response error(int status, const std::string& message,
               std::optional<std::string> field = std::nullopt) {
  Json body;
  body["error"] = message;
  body["field"] = field ? Json(*field) : Json(nullptr);
  return {status, body.dump()};
}

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

constexpr std::array<double, 4> kRawMax{domain::kFuelMaxLitres,
                                        domain::kInterruptMaxMinutes,
                                        domain::kWeaponMaxPercent,
                                        domain::kDangerMaxPoints};

}  // namespace

std::string describe_rule(const FuzzySystem& system, std::size_t rule_index) {
  const FuzzyRule& rule = system.rules().at(rule_index);
  std::string text = "if ";
  for (std::size_t j = 0; j < rule.antecedent.size(); ++j) {
    if (j > 0) text += " and ";
    const auto& var = system.inputs()[j];
    text += var.name() + " is " + var.labels()[rule.antecedent[j]];
  }
  text += " then " + system.output().name() + " is " +
          system.output().labels()[rule.consequent];
  return text;
}

InferenceService::InferenceService(FuzzySystem model) : model_(std::move(model)) {
  system_body_ = io::model_to_json(model_).dump();

  Json rules = Json::array();
  for (std::size_t r = 0; r < model_.rules().size(); ++r) {
    const FuzzyRule& rule = model_.rules()[r];
    Json jr;
    jr["rule_id"] = r;
    jr["text"] = describe_rule(model_, r);
    Json labels = Json::array();
    for (std::size_t j = 0; j < rule.antecedent.size(); ++j) {
      labels.push_back(model_.inputs()[j].labels()[rule.antecedent[j]]);
    }
    jr["antecedent"] = std::move(labels);
    jr["consequent"] = model_.output().labels()[rule.consequent];
    jr["weight"] = rule.weight;
    rules.push_back(std::move(jr));
  }
  rules_body_ = rules.dump();

  Json presets = Json::array();
  for (const auto& p : domain::presets()) {
    Json jp;
    jp["name"] = p.name;
    const auto f = p.factors.as_array();
    jp["factors"] = Json::array({f[0], f[1], f[2], f[3]});
    jp["recorded_score"] = optional_number(p.recorded_score);
    jp["expected_score"] = optional_number(p.expected_score);
    presets.push_back(std::move(jp));
  }
  presets_body_ = presets.dump();
}

Response InferenceService::infer(std::string_view body) const {
  Json request;
  try {
    request = Json::parse(body.begin(), body.end());
  } catch (const nlohmann::json::parse_error&) {
    return error(400, "malformed JSON body");
  }
  if (!request.is_object()) return error(400, "request body must be an object");

  bool raw = false;
  if (auto it = request.find("units"); it != request.end()) {
    if (!it->is_string()) return error(400, "units must be a string", "units");
    const auto units = it->get<std::string>();
    if (units == "raw") {
      raw = true;
    } else if (units != "normalized") {
      return error(400, "units must be \"normalized\" or \"raw\"", "units");
    }
  }

  auto it = request.find("factors");
  if (it == request.end()) return error(400, "missing factors", "factors");
  if (!it->is_array()) return error(400, "factors must be an array", "factors");
  const Json& factors = *it;
  const std::size_t n = model_.input_count();
  if (factors.size() != n) {
    return error(422,
                 "expected " + std::to_string(n) + " factors, got " +
                     std::to_string(factors.size()),
                 "factors");
  }
  if (raw && n != domain::kFactorNames.size()) {
    return error(400, "raw units need a four-factor model", "units");
  }

  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::string& name = model_.inputs()[j].name();
    if (!factors[j].is_number()) return error(400, name + " must be a number", name);
    x[j] = factors[j].get<double>();
    if (raw) {
      if (!(x[j] >= 0.0 && x[j] <= kRawMax[j])) {
        return error(400, name + " outside [0, " + io::format_number(kRawMax[j]) + "]",
                     name);
      }
    } else if (!model_.inputs()[j].contains(x[j])) {
      return error(400, name + " outside its domain", name);
    }
  }
  if (raw) {
    const auto normalized = domain::normalize({x[0], x[1], x[2], x[3]}).as_array();
    x.assign(normalized.begin(), normalized.end());
    for (std::size_t j = 0; j < n; ++j) {
      if (!model_.inputs()[j].contains(x[j])) {
        const std::string& name = model_.inputs()[j].name();
        return error(400, name + " outside its domain", name);
      }
    }
  }

  const InferenceResult result = tacdss::infer(model_, x);
  Json out;
  out["score"] = result.crisp;
  Json firings = Json::array();
  for (std::size_t r = 0; r < result.trace.firings.size(); ++r) {
    firings.push_back({{"rule_id", r}, {"strength", result.trace.firings[r]}});
  }
  out["firings"] = std::move(firings);
  Json memberships = Json::array();
  for (std::size_t j = 0; j < n; ++j) {
    memberships.push_back({{"variable", model_.inputs()[j].name()},
                           {"degrees", result.trace.memberships[j]}});
  }
  out["memberships"] = std::move(memberships);
  out["fallback_flag"] = result.trace.fallback;
  out["normalized_factors"] = x;
  return {200, out.dump()};
}

Response InferenceService::system() const { return {200, system_body_}; }
Response InferenceService::rules() const { return {200, rules_body_}; }
Response InferenceService::presets() const { return {200, presets_body_}; }

HttpServer::HttpServer(const InferenceService& service,
                       std::optional<std::filesystem::path> static_dir)
    : server_(std::make_unique<httplib::Server>()) {
  // SO_REUSEADDR only: httplib's default SO_REUSEPORT would let a second
  // server share an occupied port instead of failing.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  constexpr const char* kJson = "application/json";
  auto reply = [kJson](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body, kJson);
  };
  server_->Post("/api/infer", [&service, reply](const httplib::Request& req,
                                                httplib::Response& res) {
    reply(res, service.infer(req.body));
  });
  server_->Get("/api/system", [&service, reply](const httplib::Request&,
                                                httplib::Response& res) {
    reply(res, service.system());
  });
  server_->Get("/api/rules", [&service, reply](const httplib::Request&,
                                               httplib::Response& res) {
    reply(res, service.rules());
  });
  server_->Get("/api/presets", [&service, reply](const httplib::Request&,
                                                 httplib::Response& res) {
    reply(res, service.presets());
  });
  server_->set_exception_handler(
      [reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          what = e.what();
        } catch (...) {
        }
        reply(res, error(500, what));
      });
  if (static_dir) {
    if (!server_->set_mount_point("/", static_dir->string())) {
      throw IoError("static directory '" + static_dir->string() + "' does not exist");
    }
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw IoError("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw IoError("cannot bind " + host + ":" + std::to_string(port) +
                  " (address in use or unavailable)");
  }
  return port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

}  // namespace tacdss::service
