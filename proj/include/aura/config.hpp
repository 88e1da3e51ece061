#pragma once

// Flat `key = value` configuration files. Blank lines and lines starting with
// '#' are ignored; later keys override earlier ones.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "aura/engine.hpp"
#include "aura/error.hpp"
#include "aura/llm.hpp"
#include "aura/lsde.hpp"
#include "aura/sentiment.hpp"
#include "aura/specificity.hpp"
#include "aura/text.hpp"

namespace aura {

/// Every key the tools understand.
inline const std::set<std::string>& known_config_keys() {
  static const std::set<std::string> keys = {
      "horizon",         "alpha",          "epsilon",
      "epsilon_schedule", "epsilon_start", "epsilon_end",
      "generator",       "scorer_mode",    "lexicon",
      "emoji_lexicon",   "prior_table",    "bind",
      "port",            "admin_token",    "cors_origin",
      "llm_endpoint",    "llm_path",       "llm_model",
      "llm_temperature", "llm_timeout",    "llm_api_key_env",
      "transcript_dir",  "seed",           "workers"};
  return keys;
}

class Config {
 public:
  static Config parse(std::istream& in) {
    Config c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto trimmed = strip_if(line, is_space);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) +
                          ": expected key = value");
      const auto key = strip_if(std::string_view(trimmed).substr(0, eq), is_space);
      const auto value =
          strip_if(std::string_view(trimmed).substr(eq + 1), is_space);
      if (!known_config_keys().count(key))
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unknown key '" + key + "'");
      c.values_[key] = value;
    }
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in);
  }

  void set(const std::string& key, const std::string& value) {
    if (!known_config_keys().count(key))
      throw ConfigError("unknown key '" + key + "'");
    values_[key] = value;
  }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get(const std::string& key, const std::string& fallback = {}) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    double v = 0;
    const auto& s = it->second;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw ConfigError("key '" + key + "' needs a number, got '" + s + "'");
    return v;
  }

  std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::int64_t v = 0;
    const auto& s = it->second;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw ConfigError("key '" + key + "' needs an integer, got '" + s + "'");
    return v;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Session defaults from a config: horizon, alpha and the epsilon schedule
/// (`epsilon_schedule = fixed` with `epsilon`, or `decay` with
/// `epsilon_start`/`epsilon_end` over the horizon).
inline SessionConfig session_config_from(const Config& c) {
  SessionConfig s;
  s.horizon = static_cast<int>(c.get_int("horizon", 15));
  s.alpha = c.get_double("alpha", 0.3);
  s.seed = static_cast<std::uint64_t>(c.get_int("seed", 0));
  const auto kind = c.get("epsilon_schedule", "fixed");
  try {
    if (kind == "fixed")
      s.schedule = EpsilonSchedule::fixed(c.get_double("epsilon", 0.30));
    else if (kind == "decay")
      s.schedule = EpsilonSchedule::linear_decay(
          c.get_double("epsilon_start", 0.40), c.get_double("epsilon_end", 0.05),
          s.horizon);
    else
      throw ConfigError("epsilon_schedule must be 'fixed' or 'decay'");
    validate(s);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  return s;
}

inline ScoringMode scoring_mode_from(const Config& c) {
  const auto m = c.get("scorer_mode", "strict");
  if (m == "strict") return ScoringMode::strict;
  if (m == "lenient") return ScoringMode::lenient;
  throw ConfigError("scorer_mode must be 'strict' or 'lenient'");
}

inline LlmConfig llm_config_from(const Config& c) {
  LlmConfig l;
  l.endpoint = c.get("llm_endpoint", l.endpoint);
  l.path = c.get("llm_path", l.path);
  l.model = c.get("llm_model", l.model);
  l.api_key_env = c.get("llm_api_key_env", l.api_key_env);
  l.timeout_seconds = c.get_double("llm_timeout", l.timeout_seconds);
  return l;
}

#ifndef AURA_DEFAULT_DATA_DIR
#define AURA_DEFAULT_DATA_DIR "data"
#endif

/// Directory holding the sentiment lexicons and the default prior table:
/// $AURA_DATA_DIR if set, else the build-time default.
inline std::string default_data_dir() {
  if (const char* env = std::getenv("AURA_DATA_DIR"); env && *env) return env;
  return AURA_DEFAULT_DATA_DIR;
}

inline std::string data_path(const Config& c, const std::string& key,
                             const std::string& file) {
  if (c.has(key)) return c.get(key);
  return (std::filesystem::path(default_data_dir()) / file).string();
}

/// LSDE scorer with the VADER lexicons and rule-based specificity detector.
inline std::shared_ptr<LsdeScorer> make_scorer(const Config& c) {
  auto sentiment = VaderSentimentScorer::from_files(
      data_path(c, "lexicon", "vader_lexicon.txt"),
      data_path(c, "emoji_lexicon", "emoji_utf8_lexicon.txt"));
  return std::make_shared<LsdeScorer>(
      std::move(sentiment), std::make_shared<RuleSpecificityDetector>(),
      scoring_mode_from(c));
}

}  // namespace aura
