#include "concierge/cli.hpp"

#include "concierge/config.hpp"
#include "concierge/corpus_store.hpp"
#include "concierge/errors.hpp"
#include "concierge/feedback.hpp"
#include "concierge/log.hpp"
#include "concierge/pipeline.hpp"
#include "concierge/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace concierge::cli {

namespace {

struct Options {
  bool json = false;
  std::string config;
  std::optional<std::uint64_t> seed;

  std::string ingest_path;
  std::string ingest_format;
  std::string rejects_path;

  std::string post_id;
  std::optional<std::size_t> k;
  std::string target;
  std::string relaxation;

  std::string text;
  std::optional<int> port;
  std::string host;
  std::string out_path;
};

Config load_config(const Options& o) {
  Config c = Config::resolve(o.config);
  if (o.seed) c.set_seed(*o.seed);
  return c;
}

std::uint64_t recorded_version(const Config& c) {
  const auto path = pipeline::StatePaths{c.state_dir}.snapshot();
  if (!std::filesystem::exists(path)) return 0;
  std::ifstream in(path);
  return nlohmann::json::parse(in).at("version").get<std::uint64_t>();
}

// Query subcommands go through the service router so both surfaces answer
// identically.
int query(const Options& o, std::string_view method, const std::string& path, const service::QueryParams& params,
          const std::string& body, std::ostream& out, std::ostream& err,
          const std::function<void(const nlohmann::json&, std::ostream&)>& human) {
  const auto config = load_config(o);
  service::Service svc(pipeline::load_snapshot(pipeline::Resources::load(config), false));
  const auto r = svc.dispatch(method, path, params, body);
  const auto j = nlohmann::json::parse(r.body);
  if (r.status >= 400) {
    err << "error: " << j.value("message", "") << (j.value("detail", "").empty() ? "" : ": " + j.value("detail", ""))
        << "\n";
    return r.status >= 500 ? 2 : 1;
  }
  if (o.json) {
    out << r.body << "\n";
  } else {
    human(j, out);
  }
  return 0;
}

void print_stats(const nlohmann::json& j, std::ostream& out) {
  out << std::left << std::setw(24) << "Topic" << std::right << std::setw(12) << "Misleading" << std::setw(16)
      << "Non-misleading" << std::setw(12) << "Unlabeled" << std::setw(10) << "Total" << std::setw(10) << "%"
      << "\n";
  for (const auto& row : j.at("rows")) {
    out << std::left << std::setw(24) << row.at("topic").get<std::string>() << std::right << std::setw(12)
        << row.at("misleading").get<std::size_t>() << std::setw(16) << row.at("non_misleading").get<std::size_t>()
        << std::setw(12) << row.at("unlabeled").get<std::size_t>() << std::setw(10) << row.at("total").get<std::size_t>()
        << std::setw(10) << row.at("percentage").get<std::string>() << "\n";
  }
  out << "total posts: " << j.at("total").get<std::size_t>() << "\n";
}

void print_recommendations(const nlohmann::json& j, std::ostream& out) {
  const auto& list = j.at("recommendations");
  out << "recommendations for " << j.at("post_id").get<std::string>() << " (target " << j.at("target").get<std::string>()
      << ", k " << j.at("k").get<std::size_t>() << ", relaxation " << j.at("relaxation").get<std::string>() << ")\n";
  if (list.empty()) {
    out << "no counter-message found\n";
    return;
  }
  std::size_t rank = 1;
  for (const auto& r : list) {
    out << rank++ << ". " << r.at("post_id").get<std::string>() << "  similarity " << std::fixed << std::setprecision(4)
        << r.at("similarity").get<double>() << std::defaultfloat << "  tier " << r.at("tier").get<std::string>();
    const auto& entities = r.at("matched_criteria").at("entities");
    if (!entities.empty()) {
      out << "  entities";
      for (const auto& e : entities) out << " " << e.at("surface").get<std::string>() << "/" << e.at("type").get<std::string>();
    }
    out << "\n";
  }
}

void print_analysis(const nlohmann::json& j, std::ostream& out) {
  const auto& a = j.at("analysis");
  out << "label:     " << (a.at("label").is_null() ? "(no classifier)" : a.at("label").get<std::string>()) << "\n";
  out << "topic:     " << a.at("topic").at("name").get<std::string>() << "\n";
  out << "sentiment: " << a.at("sentiment").at("class").get<std::string>() << " (compound "
      << a.at("sentiment").at("compound").get<double>() << ")\n";
  out << "entities: ";
  for (const auto& e : a.at("entities")) out << " " << e.at("surface").get<std::string>() << "/" << e.at("type").get<std::string>();
  out << "\n";
}

int do_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = load_config(o);
  corpus::Format format = corpus::Format::kJsonl;
  if (!o.ingest_format.empty()) {
    auto f = corpus::parse_format(o.ingest_format);
    if (!f) throw Error(ErrorCode::kInvalidArgument, "format must be jsonl or csv", o.ingest_format);
    format = *f;
  } else if (std::filesystem::path(o.ingest_path).extension() == ".csv") {
    format = corpus::Format::kCsv;
  }
  const pipeline::StatePaths state{config.state_dir};
  auto store = corpus::CorpusStore::load(state.corpus());
  const auto report = store.ingest(o.ingest_path, format);
  store.save(state.corpus());

  std::map<corpus::Relevance, std::size_t> relevance;
  if (!config.relevance_keywords.empty()) {
    for (const auto& p : store.snapshot()->posts()) ++relevance[corpus::relevance_filter(p.post, config.relevance_keywords)];
  }
  if (!o.rejects_path.empty()) {
    std::ofstream rej(o.rejects_path);
    if (!rej) throw Error(ErrorCode::kIo, "cannot write rejects report", o.rejects_path);
    corpus::write_rejects(report.rejects, rej);
  }
  if (o.json) {
    nlohmann::ordered_json j;
    j["accepted"] = report.accepted;
    j["rejected"] = report.rejects.size();
    j["total"] = report.stats.total;
    auto rejects = nlohmann::ordered_json::array();
    for (const auto& r : report.rejects) rejects.push_back({{"line", r.line}, {"reason", r.reason}});
    j["rejects"] = rejects;
    if (!relevance.empty()) {
      for (const auto& [k, v] : relevance) j["relevance"][std::string(corpus::to_string(k))] = v;
    }
    out << j.dump() << "\n";
  } else {
    out << "accepted " << report.accepted << ", rejected " << report.rejects.size() << ", store total "
        << report.stats.total << "\n";
    for (const auto& r : report.rejects) err << "rejected line " << r.line << ": " << r.reason << "\n";
    for (const auto& [k, v] : relevance) out << "relevance " << corpus::to_string(k) << ": " << v << "\n";
  }
  return 0;
}

int do_annotate(const Options& o, std::ostream& out, const char* verb) {
  const auto config = load_config(o);
  const auto previous = recorded_version(config);
  const auto snap = pipeline::rebuild(pipeline::Resources::load(config), previous);
  std::size_t labeled = 0;
  for (const auto& p : snap->corpus->posts()) labeled += p.label != Label::kUnlabeled;
  if (o.json) {
    nlohmann::ordered_json j;
    j["snapshot_version"] = snap->version;
    j["previous_version"] = previous;
    j["posts"] = snap->corpus->size();
    j["labeled"] = labeled;
    j["classifier"] = snap->classifier.has_value();
    out << j.dump() << "\n";
  } else {
    out << verb << ": snapshot " << snap->version << " over " << snap->corpus->size() << " posts (" << labeled
        << " labeled)\n";
  }
  return 0;
}

volatile std::sig_atomic_t g_stop = 0;
service::HttpServer* g_server = nullptr;

int do_serve(const Options& o, std::ostream& out) {
  const auto config = load_config(o);
  service::Service svc(pipeline::load_snapshot(pipeline::Resources::load(config), true));
  service::HttpServer server(svc);
  const auto host = o.host.empty() ? config.host : o.host;
  const int port = o.port.value_or(config.port);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  server.run(host, port, [&](int bound) {
    out << "serving snapshot " << svc.current()->version << " on http://" << host << ":" << bound << "\n" << std::flush;
  });
  g_server = nullptr;
  return 0;
}

int do_export_feedback(const Options& o, std::ostream& out) {
  const auto config = load_config(o);
  const auto records = feedback::FeedbackLog::read(pipeline::StatePaths{config.state_dir}.feedback());
  std::ofstream file;
  std::ostream* sink = &out;
  if (!o.out_path.empty()) {
    file.open(o.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorCode::kIo, "cannot write", o.out_path);
    sink = &file;
  }
  for (const auto& r : records) *sink << feedback::to_json(r).dump() << "\n";
  if (sink != &out && !o.json) out << "exported " << records.size() << " feedback records\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Misinformation triage: ingest, annotate, inspect, recommend, serve, retrain.", "concierge"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Print JSON instead of tables");
  app.add_option("--config", o.config, "Config file (default: $CONCIERGE_CONFIG, then ./concierge.conf)");
  app.add_option("--seed", o.seed, "Seed for the stochastic stages");

  auto* ingest = app.add_subcommand("ingest", "Add posts from a JSONL or CSV file to the store");
  ingest->add_option("path", o.ingest_path, "Input file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--format", o.ingest_format, "jsonl or csv (default: by extension)");
  ingest->add_option("--rejects", o.rejects_path, "Write the rejects report (JSONL) here");

  auto* annotate = app.add_subcommand("annotate", "Run every model over the store and publish a snapshot");
  auto* stats = app.add_subcommand("stats", "Topic distribution per label");

  auto* recommend = app.add_subcommand("recommend", "Rebuttal (or similar misleading) posts for a post");
  recommend->add_option("id", o.post_id, "Post id")->required();
  recommend->add_option("-k", o.k, "Number of recommendations (default 3)")->check(CLI::PositiveNumber);
  recommend->add_option("--target", o.target, "non-misleading (default) or misleading");
  recommend->add_option("--relaxation", o.relaxation, "strict, entity-drop or sentiment-drop");

  auto* analyze = app.add_subcommand("analyze", "Annotate free text without storing it");
  analyze->add_option("--text", o.text, "Text to analyze")->required();

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--port", o.port, "Port (default from config)");
  serve->add_option("--host", o.host, "Host (default from config)");

  auto* retrain = app.add_subcommand("retrain", "Fold the feedback log in and publish a new snapshot");
  auto* export_feedback = app.add_subcommand("export-feedback", "Print the feedback log as JSONL");
  export_feedback->add_option("--out", o.out_path, "Write to a file instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (ingest->parsed()) return do_ingest(o, out, err);
    if (annotate->parsed()) return do_annotate(o, out, "annotate");
    if (retrain->parsed()) return do_annotate(o, out, "retrain");
    if (stats->parsed()) return query(o, "GET", "/stats/topics", {}, "", out, err, print_stats);
    if (recommend->parsed()) {
      service::QueryParams params;
      if (o.k) params["k"] = std::to_string(*o.k);
      if (!o.target.empty()) params["target"] = o.target;
      if (!o.relaxation.empty()) params["relaxation"] = o.relaxation;
      return query(o, "GET", "/posts/" + o.post_id + "/recommendations", params, "", out, err, print_recommendations);
    }
    if (analyze->parsed()) {
      return query(o, "POST", "/analyze", {}, nlohmann::json{{"text", o.text}}.dump(), out, err, print_analysis);
    }
    if (serve->parsed()) return do_serve(o, out);
    if (export_feedback->parsed()) return do_export_feedback(o, out);
  } catch (const Error& ex) {
    err << "error: " << ex.what() << (ex.detail().empty() ? "" : ": " + ex.detail()) << "\n";
    return ex.code() == ErrorCode::kInternal ? 2 : 1;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << "\n";
    return 2;
  }
  err << app.help();
  return 1;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace concierge::cli
