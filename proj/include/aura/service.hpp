#pragma once

// HTTP+JSON front end for live sessions.
//
//   POST   /sessions                 create; body may override horizon,
//                                    epsilon, alpha, role, topic, seed
//   GET    /sessions/{id}            respondent view
//   POST   /sessions/{id}/messages   {"text": ...} -> one engine step
//   GET    /sessions/{id}/debug      admin view (X-Admin-Token)
//   DELETE /sessions/{id}            end the session
//   GET    /healthz

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>

#include "aura/engine.hpp"
#include "aura/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace aura {

struct ServiceConfig {
  std::string bind = "127.0.0.1";
  int port = 8080;
  std::string admin_token;  // debug endpoint disabled when empty
  std::string cors_origin;  // no CORS headers when empty
  SessionConfig defaults;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

inline ApiResponse api_error(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

class SurveyService {
 public:
  /// `engine` may be null; session creation then answers 503.
  SurveyService(std::shared_ptr<const Engine> engine, ServiceConfig cfg)
      : engine_(std::move(engine)), cfg_(std::move(cfg)) {
    install_routes();
  }

  SurveyService(const SurveyService&) = delete;
  SurveyService& operator=(const SurveyService&) = delete;

  ApiResponse create_session(const std::string& body,
                             const std::string& idempotency_key = {}) {
    if (!engine_) return api_error(503, "no prior EV table loaded");
    std::lock_guard lock(store_mu_);
    if (!idempotency_key.empty()) {
      const auto it = create_cache_.find(idempotency_key);
      if (it != create_cache_.end()) return it->second;
    }
    SessionConfig sc = cfg_.defaults;
    sc.seed = random_u64();
    if (auto err = apply_overrides(body, sc)) return *err;
    sc.session_id = random_id();
    auto entry = std::make_shared<Entry>();
    try {
      entry->session = engine_->start_session(sc);
    } catch (const ContractViolation& e) {
      return api_error(422, e.what());
    }
    ApiResponse res{201, respondent_view(entry->session)};
    sessions_[entry->session.id()] = entry;
    if (!idempotency_key.empty()) create_cache_[idempotency_key] = res;
    return res;
  }

  ApiResponse get_session(const std::string& id) {
    auto entry = find(id);
    if (!entry) return api_error(404, "unknown session");
    std::lock_guard lock(entry->mu);
    return {200, respondent_view(entry->session)};
  }

  /// One engine step per accepted message. A message arriving while another
  /// step on the same session is running is rejected as busy.
  ApiResponse post_message(const std::string& id, const std::string& body,
                           const std::string& idempotency_key = {}) {
    auto entry = find(id);
    if (!entry) return api_error(404, "unknown session");
    std::unique_lock lock(entry->mu, std::try_to_lock);
    if (!lock.owns_lock()) return api_error(409, "busy");
    if (!idempotency_key.empty()) {
      const auto it = entry->replies.find(idempotency_key);
      if (it != entry->replies.end()) return it->second;
    }
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("text") ||
        !j.at("text").is_string())
      return api_error(422, "body must be {\"text\": string}");
    const auto text = j.at("text").get<std::string>();
    if (strip_if(text, is_space).empty())
      return api_error(422, "text must not be empty");
    if (entry->session.status() != SessionStatus::active)
      return api_error(409, "session " +
                                std::string(to_string(entry->session.status())));
    try {
      engine_->step(entry->session, text);
    } catch (const SessionStateError& e) {
      return api_error(409, e.what());
    } catch (const std::exception& e) {
      return api_error(500, e.what());
    }
    ApiResponse res{200, respondent_view(entry->session)};
    if (!idempotency_key.empty()) entry->replies[idempotency_key] = res;
    return res;
  }

  /// 401 without a token, 403 with a wrong one (or when no token is set).
  ApiResponse debug_view(const std::string& id, const std::string* token) {
    if (!token) return api_error(401, "admin token required");
    if (cfg_.admin_token.empty() || *token != cfg_.admin_token)
      return api_error(403, "admin token rejected");
    auto entry = find(id);
    if (!entry) return api_error(404, "unknown session");
    std::lock_guard lock(entry->mu);
    return {200, admin_view(entry->session)};
  }

  ApiResponse end_session(const std::string& id) {
    auto entry = find(id);
    if (!entry) return api_error(404, "unknown session");
    std::unique_lock lock(entry->mu, std::try_to_lock);
    if (!lock.owns_lock()) return api_error(409, "busy");
    try {
      engine_->end_session(entry->session);
    } catch (const std::exception& e) {
      return api_error(500, e.what());
    }
    return {200, respondent_view(entry->session)};
  }

  ApiResponse health() const {
    return {200, {{"status", "ok"}, {"prior_loaded", engine_ != nullptr}}};
  }

  /// Fields a respondent may see; no policy internals.
  static nlohmann::json respondent_view(const ConversationSession& s) {
    const bool open = s.status() == SessionStatus::active;
    return {{"session_id", s.id()},
            {"status", std::string(to_string(s.status()))},
            {"t", s.t()},
            {"horizon", s.config().horizon},
            {"question", open ? nlohmann::json(s.current_question())
                              : nlohmann::json(nullptr)},
            {"completed", !open}};
  }

  static nlohmann::json admin_view(const ConversationSession& s) {
    auto j = respondent_view(s);
    j["role"] = s.config().role;
    j["topic"] = s.config().topic;
    j["mode"] = s.config().mode == SelectionMode::policy ? "policy" : "baseline";
    j["alpha"] = s.config().alpha;
    nlohmann::json eps = nlohmann::json::array();
    nlohmann::json exchanges = nlohmann::json::array();
    for (const auto& e : s.exchanges()) {
      eps.push_back(e.epsilon_effective);
      exchanges.push_back(to_json(e));
    }
    j["epsilon_series"] = eps;
    j["exchanges"] = exchanges;
    if (!s.exchanges().empty()) {
      const auto& last = s.exchanges().back();
      j["state"] = std::string(to_string(last.state));
      j["last_action"] = last.next_action
                             ? nlohmann::json(std::string(to_string(*last.next_action)))
                             : nlohmann::json(nullptr);
      j["epsilon_effective"] = last.epsilon_effective;
      j["explored"] = last.explored;
      j["lsde"] = to_json(last)["lsde"];
      if (const auto* ev = s.ev_table()) {
        nlohmann::json row = nlohmann::json::object();
        for (auto a : kAllActions)
          row[std::string(to_string(a))] = ev->value(last.state, a);
        j["ev_row"] = row;
      }
    }
    return j;
  }

  httplib::Server& http() { return server_; }
  const ServiceConfig& config() const { return cfg_; }

  /// Binds to the configured address; port 0 picks a free port. Returns the
  /// bound port or -1.
  int bind() {
    if (cfg_.port == 0) return server_.bind_to_any_port(cfg_.bind);
    return server_.bind_to_port(cfg_.bind, cfg_.port) ? cfg_.port : -1;
  }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void stop() { server_.stop(); }

 private:
  struct Entry {
    std::mutex mu;
    ConversationSession session;
    std::unordered_map<std::string, ApiResponse> replies;
  };

  std::shared_ptr<Entry> find(const std::string& id) {
    std::lock_guard lock(store_mu_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  static std::optional<ApiResponse> apply_overrides(const std::string& body,
                                                    SessionConfig& sc) {
    if (strip_if(body, is_space).empty()) return std::nullopt;
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      return api_error(422, "body must be a JSON object");
    try {
      if (j.contains("horizon")) {
        if (!j.at("horizon").is_number_integer())
          return api_error(422, "horizon must be an integer");
        sc.horizon = j.at("horizon").get<int>();
        if (sc.horizon < 1) return api_error(422, "horizon must be >= 1");
      }
      if (j.contains("alpha")) {
        if (!j.at("alpha").is_number()) return api_error(422, "alpha must be a number");
        sc.alpha = j.at("alpha").get<double>();
        if (!(sc.alpha > 0.0 && sc.alpha <= 1.0))
          return api_error(422, "alpha must be in (0,1]");
      }
      if (j.contains("epsilon")) {
        if (!j.at("epsilon").is_number())
          return api_error(422, "epsilon must be a number");
        const double eps = j.at("epsilon").get<double>();
        if (!(eps >= 0.0 && eps <= 1.0))
          return api_error(422, "epsilon must be in [0,1]");
        sc.schedule = EpsilonSchedule::fixed(eps);
      }
      if (j.contains("epsilon_decay")) {
        const auto& d = j.at("epsilon_decay");
        if (!d.is_object() || !d.contains("start") || !d.contains("end"))
          return api_error(422, "epsilon_decay needs start and end");
        const double s = d.at("start").get<double>();
        const double e = d.at("end").get<double>();
        if (!(s >= 0.0 && s <= 1.0 && e >= 0.0 && e <= s))
          return api_error(422, "epsilon_decay needs 0 <= end <= start <= 1");
        sc.schedule = EpsilonSchedule::linear_decay(s, e, sc.horizon);
      }
      if (j.contains("role")) sc.role = j.at("role").get<std::string>();
      if (j.contains("topic")) sc.topic = j.at("topic").get<std::string>();
      if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
    } catch (const std::exception& e) {
      return api_error(422, e.what());
    }
    return std::nullopt;
  }

  static std::uint64_t random_u64() {
    static std::mutex mu;
    static std::random_device rd;
    std::lock_guard lock(mu);
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }

  static std::string random_id() {
    static constexpr char hex[] = "0123456789abcdef";
    std::string id;
    for (int k = 0; k < 2; ++k) {
      auto x = random_u64();
      for (int i = 0; i < 16; ++i, x >>= 4) id.push_back(hex[x & 15]);
    }
    return id;
  }

  static void reply(httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body.dump(), "application/json");
  }

  static std::string header(const httplib::Request& req, const char* name) {
    return req.has_header(name) ? req.get_header_value(name) : std::string{};
  }

  void install_routes() {
    const std::string origin = cfg_.cors_origin;
    server_.set_post_routing_handler(
        [origin](const httplib::Request&, httplib::Response& res) {
          if (origin.empty()) return;
          res.set_header("Access-Control-Allow-Origin", origin);
          res.set_header("Access-Control-Allow-Headers",
                         "Content-Type, Idempotency-Key, X-Admin-Token");
          res.set_header("Access-Control-Allow-Methods",
                         "GET, POST, DELETE, OPTIONS");
        });
    server_.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    server_.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, health());
    });
    server_.Post("/sessions", [this](const httplib::Request& req,
                                     httplib::Response& res) {
      reply(res, create_session(req.body, header(req, "Idempotency-Key")));
    });
    server_.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req,
                                               httplib::Response& res) {
      reply(res, get_session(req.matches[1]));
    });
    server_.Post(R"(/sessions/([^/]+)/messages)",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   reply(res, post_message(req.matches[1], req.body,
                                           header(req, "Idempotency-Key")));
                 });
    server_.Get(R"(/sessions/([^/]+)/debug)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  std::string token;
                  const bool has = req.has_header("X-Admin-Token");
                  if (has) token = req.get_header_value("X-Admin-Token");
                  reply(res, debug_view(req.matches[1], has ? &token : nullptr));
                });
    server_.Delete(R"(/sessions/([^/]+))", [this](const httplib::Request& req,
                                                  httplib::Response& res) {
      reply(res, end_session(req.matches[1]));
    });
  }

  std::shared_ptr<const Engine> engine_;
  ServiceConfig cfg_;
  httplib::Server server_;
  std::mutex store_mu_;
  std::unordered_map<std::string, std::shared_ptr<Entry>> sessions_;
  std::unordered_map<std::string, ApiResponse> create_cache_;
};

}  // namespace aura
