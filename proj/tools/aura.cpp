// aura: compute priors, score text, run experiments, chat, serve.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 external-service error.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aura/actions.hpp"
#include "aura/config.hpp"
#include "aura/corpus.hpp"
#include "aura/engine.hpp"
#include "aura/error.hpp"
#include "aura/llm.hpp"
#include "aura/lsde.hpp"
#include "aura/policy.hpp"
#include "aura/question.hpp"
#include "aura/service.hpp"
#include "aura/sim.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitExternal = 3;

struct Shared {
  std::string config_path;
  std::int64_t seed = -1;
  bool verbose = false;
  bool json = false;
};

aura::Config load_config(const Shared& sh) {
  auto cfg = sh.config_path.empty() ? aura::Config{}
                                    : aura::Config::load(sh.config_path);
  if (sh.seed >= 0) cfg.set("seed", std::to_string(sh.seed));
  return cfg;
}

void log(const Shared& sh, const std::string& msg) {
  if (sh.verbose) std::cerr << "aura: " << msg << '\n';
}

std::shared_ptr<aura::IntentClassifier> make_classifier(
    const std::string& kind, const aura::Config& cfg) {
  if (kind == "keyword") return std::make_shared<aura::KeywordIntentClassifier>();
  if (kind == "llm")
    return std::make_shared<aura::LlmIntentClassifier>(
        std::make_shared<aura::HttpChatClient>(aura::llm_config_from(cfg)));
  throw aura::ConfigError("classifier must be 'keyword' or 'llm'");
}

std::shared_ptr<aura::QuestionGenerator> make_generator(
    const std::string& kind, const aura::Config& cfg) {
  if (kind == "templates")
    return std::make_shared<aura::TemplateQuestionGenerator>();
  if (kind == "llm")
    return std::make_shared<aura::LlmQuestionGenerator>(
        std::make_shared<aura::HttpChatClient>(aura::llm_config_from(cfg)),
        cfg.get_double("llm_temperature", 0.7));
  throw aura::ConfigError("generator must be 'templates' or 'llm'");
}

std::shared_ptr<const aura::EvTable> load_prior(const aura::Config& cfg) {
  return std::make_shared<const aura::EvTable>(aura::load_ev_table(
      aura::data_path(cfg, "prior_table", "prior_ev_table.tsv")));
}

nlohmann::json table_json(const aura::EvTable& t) {
  nlohmann::json cells = nlohmann::json::array();
  for (auto s : aura::kAllStates)
    for (auto a : aura::kAllActions) {
      const auto n = t.count(s, a);
      cells.push_back({{"state", std::string(aura::to_string(s))},
                       {"action", std::string(aura::to_string(a))},
                       {"ev", t.value(s, a)},
                       {"n", n},
                       {"band", std::string(1, aura::confidence_band(n))}});
    }
  return cells;
}

// priors ------------------------------------------------------------------

struct PriorsArgs {
  std::string input;
  std::string pairs;
  std::string output;
  std::string pairs_out;
  std::string classifier = "keyword";
};

int run_priors(const Shared& sh, const PriorsArgs& args) {
  const auto cfg = load_config(sh);
  std::vector<aura::ExchangePair> pairs;
  if (!args.pairs.empty()) {
    pairs = aura::load_pairs(args.pairs);
  } else if (!args.input.empty()) {
    const auto cleaned = aura::clean(aura::load_records(args.input));
    if (!cleaned.empty()) {
      const auto scorer = aura::make_scorer(cfg);
      const auto classifier = make_classifier(args.classifier, cfg);
      pairs = aura::extract_pairs(cleaned, *scorer, *classifier);
    }
    log(sh, std::to_string(cleaned.size()) + " valid responses");
  } else {
    throw aura::ConfigError("priors needs a conversation log or --pairs");
  }
  if (pairs.empty())
    std::cerr << "aura: warning: no exchange pairs; every EV cell is 0\n";
  const auto table = aura::compute_priors(pairs);
  if (!args.pairs_out.empty()) aura::save_pairs(args.pairs_out, pairs);
  if (!args.output.empty()) aura::save_ev_table(args.output, table);
  if (sh.json)
    std::cout << nlohmann::json{{"pairs", pairs.size()}, {"cells", table_json(table)}}
                     .dump(2)
              << '\n';
  else if (args.output.empty())
    std::cout << aura::serialize(table);
  return kExitOk;
}

// score -------------------------------------------------------------------

int run_score(const Shared& sh, const std::vector<std::string>& words) {
  const auto cfg = load_config(sh);
  std::string text;
  if (words.empty()) {
    std::string line;
    while (std::getline(std::cin, line)) text += (text.empty() ? "" : "\n") + line;
  } else {
    for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
  }
  const auto r = aura::make_scorer(cfg)->score(text);
  const auto& s = r.score;
  if (sh.json) {
    std::cout << nlohmann::json{{"length", s.length},
                                {"disclosure", s.disclosure},
                                {"emotion", s.emotion},
                                {"specificity", s.specificity},
                                {"composite", s.composite},
                                {"entities", r.specificity_flags.entities},
                                {"temporal", r.specificity_flags.temporal},
                                {"spatial", r.specificity_flags.spatial},
                                {"degraded", r.degraded()}}
                     .dump(2)
              << '\n';
  } else {
    std::printf("length       %.4f\n", s.length);
    std::printf("disclosure   %.4f\n", s.disclosure);
    std::printf("emotion      %.4f\n", s.emotion);
    std::printf("specificity  %.4f  (entities=%d temporal=%d spatial=%d)\n",
                s.specificity, r.specificity_flags.entities,
                r.specificity_flags.temporal, r.specificity_flags.spatial);
    std::printf("composite    %.4f  (%s)\n", s.composite,
                std::string(aura::kQualityBucketNames[static_cast<std::size_t>(
                                aura::quality_bucket(s.composite))])
                    .c_str());
  }
  return kExitOk;
}

// stats -------------------------------------------------------------------

int run_stats(const Shared& sh, const std::string& input) {
  const auto raw = aura::load_records(input);
  const auto cleaned = aura::clean(raw);
  const auto st = aura::corpus_stats(cleaned);
  if (sh.json) {
    auto j = aura::to_json(st);
    j["raw_records"] = raw.size();
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }
  std::printf("records (raw)           %zu\n", raw.size());
  std::printf("conversations           %zu\n", st.n_conversations);
  std::printf("valid responses         %zu\n", st.n_valid_responses);
  std::printf("exchange pairs          %zu\n", st.n_pairs);
  std::printf("exchanges/conversation  %.1f +- %.1f (median %.1f, range %zu-%zu)\n",
              st.mean_exchanges, st.sd_exchanges, st.median_exchanges,
              st.min_exchanges, st.max_exchanges);
  std::printf("single-exchange         %zu (%.1f%%)\n",
              st.single_exchange_conversations,
              100.0 * st.single_exchange_fraction);
  std::printf("words/response          %.1f +- %.1f (median %.1f)\n",
              st.mean_response_words, st.sd_response_words,
              st.median_response_words);
  return kExitOk;
}

// simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string design = "standard";
  std::string users = "scripted";
  std::string out;
  int reps = 5;
  int workers = 1;
  std::vector<std::string> conditions;
  std::vector<std::string> profiles;
};

int run_simulate(const Shared& sh, const SimulateArgs& args) {
  auto cfg = load_config(sh);
  if (args.design != "standard")
    throw aura::ConfigError("only the 'standard' design is built in");
  const auto session_defaults = aura::session_config_from(cfg);
  aura::Engine engine(load_prior(cfg), aura::make_scorer(cfg),
                      make_generator(cfg.get("generator", "templates"), cfg));
  aura::sim::ExperimentDesign design;
  design.seed = session_defaults.seed;
  design.reps = args.reps;
  design.horizon = session_defaults.horizon;
  design.alpha = session_defaults.alpha;
  design.workers = args.workers > 0
                       ? args.workers
                       : static_cast<int>(cfg.get_int("workers", 1));
  if (!args.conditions.empty()) {
    std::vector<aura::sim::Condition> keep;
    for (const auto& name : args.conditions) {
      bool found = false;
      for (const auto& c : design.conditions)
        if (c.name == name) {
          keep.push_back(c);
          found = true;
        }
      if (!found) throw aura::ConfigError("unknown condition '" + name + "'");
    }
    design.conditions = keep;
  }
  if (!args.profiles.empty()) {
    for (const auto& p : args.profiles) aura::sim::find_profile(p);
    design.profiles = args.profiles;
  }
  aura::sim::UserFactory users;
  if (args.users == "scripted")
    users = aura::sim::scripted_users();
  else if (args.users == "llm")
    users = aura::sim::llm_users(
        std::make_shared<aura::HttpChatClient>(aura::llm_config_from(cfg)), 0.8);
  else
    throw aura::ConfigError("users must be 'scripted' or 'llm'");

  const auto report = aura::sim::run_experiment(engine, design, users);
  if (!args.out.empty()) {
    aura::sim::write_report(report, args.out);
    log(sh, "report written to " + args.out);
  }
  if (sh.json)
    std::cout << aura::sim::to_json(report)["summaries"].dump(2) << '\n';
  else
    std::cout << aura::sim::render_tables(report);
  std::size_t failed = 0;
  for (const auto& c : report.conversations) failed += c.ok() ? 0 : 1;
  if (failed) {
    std::cerr << "aura: warning: " << failed << " of "
              << report.conversations.size() << " conversations failed\n";
    if (failed == report.conversations.size()) return kExitExternal;
  }
  return kExitOk;
}

// chat --------------------------------------------------------------------

int run_chat(const Shared& sh, const std::string& generator,
             const std::string& topic, const std::string& transcript) {
  auto cfg = load_config(sh);
  const auto gen = generator.empty() ? cfg.get("generator", "templates") : generator;
  aura::Engine engine(load_prior(cfg), aura::make_scorer(cfg),
                      make_generator(gen, cfg));
  auto sc = aura::session_config_from(cfg);
  sc.topic = topic;
  auto session = engine.start_session(sc);
  std::cout << "Type /quit to stop.\n";
  std::string line;
  while (session.status() == aura::SessionStatus::active) {
    std::cout << "aura> " << session.current_question() << "\nyou> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    if (aura::strip_if(line, aura::is_space) == "/quit") break;
    const auto& rec = engine.step(session, line);
    if (sh.verbose)
      std::cerr << "  [t=" << rec.t << " Q=" << rec.quality
                << " state=" << aura::to_string(rec.state) << " eps="
                << rec.epsilon_effective << (rec.explored ? " explored" : "")
                << "]\n";
  }
  const auto t = engine.end_session(session);
  std::cout << "\nSession " << aura::to_string(t.status) << " after "
            << t.exchanges.size() << " exchange(s). Thank you!\n";
  if (!transcript.empty()) {
    std::ofstream out(transcript, std::ios::binary);
    if (!out) throw aura::DataError("cannot write transcript: " + transcript);
    out << t.to_jsonl();
  }
  return kExitOk;
}

// serve -------------------------------------------------------------------

aura::SurveyService* g_service = nullptr;

extern "C" void handle_signal(int) {
  if (g_service) g_service->stop();
}

int run_serve(const Shared& sh, const std::string& bind, int port) {
  const auto cfg = load_config(sh);
  aura::ServiceConfig sc;
  sc.bind = bind.empty() ? cfg.get("bind", "127.0.0.1") : bind;
  sc.port = port >= 0 ? port : static_cast<int>(cfg.get_int("port", 8080));
  sc.admin_token = cfg.get("admin_token");
  sc.cors_origin = cfg.get("cors_origin");
  sc.defaults = aura::session_config_from(cfg);
  std::shared_ptr<const aura::Engine> engine;
  try {
    engine = std::make_shared<const aura::Engine>(
        load_prior(cfg), aura::make_scorer(cfg),
        make_generator(cfg.get("generator", "templates"), cfg),
        cfg.get("transcript_dir"));
  } catch (const aura::DataError& e) {
    std::cerr << "aura: warning: " << e.what()
              << "; sessions will be refused until a prior table is available\n";
  }
  aura::SurveyService service(engine, sc);
  const int bound = service.bind();
  if (bound < 0)
    throw aura::ConfigError("cannot bind " + sc.bind + ":" + std::to_string(sc.port));
  g_service = &service;
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);
  std::cerr << "aura: listening on " << sc.bind << ':' << bound << '\n';
  service.listen_after_bind();
  g_service = nullptr;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive conversational survey engine"};
  app.require_subcommand(1);
  app.fallthrough();
  Shared sh;
  app.add_option("--config", sh.config_path, "flat key=value config file");
  app.add_option("--seed", sh.seed, "random seed (overrides config)");
  app.add_flag("-v,--verbose", sh.verbose, "diagnostics on stderr");
  app.add_flag("--json", sh.json, "machine-readable output");

  PriorsArgs pa;
  auto* priors = app.add_subcommand("priors", "build the prior EV table");
  priors->add_option("log", pa.input, "conversation log (JSONL)");
  priors->add_option("--pairs", pa.pairs, "read exchange pairs instead of a log");
  priors->add_option("-o,--output", pa.output, "EV table file (default: stdout)");
  priors->add_option("--pairs-out", pa.pairs_out, "also write extracted pairs");
  priors->add_option("--classifier", pa.classifier, "keyword | llm");

  std::vector<std::string> words;
  auto* score = app.add_subcommand("score", "print the LSDE breakdown of a text");
  score->add_option("text", words, "text to score (default: stdin)");

  std::string stats_input;
  auto* stats = app.add_subcommand("stats", "descriptive corpus statistics");
  stats->add_option("log", stats_input, "conversation log (JSONL)")->required();

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "run the controlled experiment");
  simulate->add_option("--design", sa.design, "experiment design (standard)");
  simulate->add_option("--users", sa.users, "scripted | llm");
  simulate->add_option("--reps", sa.reps, "repetitions per profile");
  simulate->add_option("--workers", sa.workers, "parallel conversations");
  simulate->add_option("--out", sa.out, "output directory for report and transcripts");
  simulate->add_option("--conditions", sa.conditions, "subset of conditions");
  simulate->add_option("--profiles", sa.profiles, "subset of profiles");

  std::string generator;
  std::string topic;
  std::string transcript;
  auto* chat = app.add_subcommand("chat", "interactive survey in the terminal");
  chat->add_option("--generator", generator, "templates | llm");
  chat->add_option("--topic", topic, "survey topic");
  chat->add_option("--transcript", transcript, "write the transcript here");

  std::string bind;
  int port = -1;
  auto* serve = app.add_subcommand("serve", "HTTP service");
  serve->add_option("--bind", bind, "address to bind");
  serve->add_option("--port", port, "port (0 picks a free port)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*priors) return run_priors(sh, pa);
    if (*score) return run_score(sh, words);
    if (*stats) return run_stats(sh, stats_input);
    if (*simulate) return run_simulate(sh, sa);
    if (*chat) return run_chat(sh, generator, topic, transcript);
    if (*serve) return run_serve(sh, bind, port);
  } catch (const aura::DataError& e) {
    std::cerr << "aura: data error: " << e.what() << '\n';
    return kExitData;
  } catch (const aura::ScoringError& e) {
    std::cerr << "aura: scoring error: " << e.what() << '\n';
    return kExitData;
  } catch (const aura::LlmError& e) {
    std::cerr << "aura: external service error: " << e.what() << '\n';
    return kExitExternal;
  } catch (const aura::ClassificationError& e) {
    std::cerr << "aura: external service error: " << e.what() << '\n';
    return kExitExternal;
  } catch (const std::exception& e) {
    std::cerr << "aura: error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
