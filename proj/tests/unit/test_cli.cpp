#include <doctest.h>

#include "concierge/cli.hpp"
#include "concierge/service.hpp"
#include "helpers.hpp"

#include <sstream>

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

struct Cli {
  testing::TempDir dir;
  std::string config;

  explicit Cli(const std::string& extra = "") : config(testing::write_config(dir, extra).string()) {}

  Run operator()(std::vector<std::string> args) const {
    args.insert(args.begin(), {"--config", config});
    std::ostringstream out, err;
    const int code = concierge::cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }
};

std::string fixture_corpus() { return (testing::data_dir() / "fixtures" / "corpus.jsonl").string(); }

}  // namespace

TEST_CASE("ingest, annotate, query") {
  Cli cli;
  auto ing = cli({"ingest", fixture_corpus()});
  CHECK(ing.code == 0);
  CHECK(ing.out.find("66") != std::string::npos);
  CHECK(cli({"--json", "ingest", fixture_corpus()}).code == 0);

  auto ann = cli({"--json", "annotate"});
  REQUIRE(ann.code == 0);
  CHECK(json::parse(ann.out)["snapshot_version"] == 1);

  auto stats = cli({"stats"});
  CHECK(stats.code == 0);
  CHECK(stats.out.find("Topic") != std::string::npos);
  CHECK(stats.out.find("total posts: 66") != std::string::npos);

  auto rec = cli({"recommend", "T001"});
  CHECK(rec.code == 0);
  CHECK(rec.out.find("k 3") != std::string::npos);

  auto an = cli({"--json", "analyze", "--text", "pfizer is poison"});
  CHECK(an.code == 0);
  CHECK(json::parse(an.out)["analysis"]["entities"][0]["surface"] == "pfizer");

  auto retrain = cli({"--json", "retrain"});
  CHECK(retrain.code == 0);
  CHECK(json::parse(retrain.out)["snapshot_version"] == 2);
}

TEST_CASE("exit codes") {
  Cli cli;
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"ingest", "/no/such/file.jsonl"}).code == 1);
  CHECK(cli({"ingest", fixture_corpus(), "--format", "xml"}).code == 1);
  CHECK(cli({"recommend", "T001", "-k", "0"}).code == 1);
  CHECK(cli({"serve", "--port", "0"}).code == 1);  // nothing annotated yet
  REQUIRE(cli({"ingest", fixture_corpus()}).code == 0);
  REQUIRE(cli({"annotate"}).code == 0);
  auto nf = cli({"recommend", "NOPE"});
  CHECK(nf.code == 1);
  CHECK(nf.err.find("unknown post") != std::string::npos);
  CHECK(cli({"recommend", "T002"}).code == 1);
  CHECK(cli({"recommend", "T001", "--relaxation", "loose"}).code == 1);
  CHECK(cli({"--help"}).code == 0);

  std::ostringstream out, err;
  CHECK(concierge::cli::run({"--config", "/no/such.conf", "stats"}, out, err) == 1);
}

TEST_CASE("stats on an empty store") {
  Cli cli;
  auto r = cli({"--json", "stats"});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["total"] == 0);
  CHECK(j["rows"].empty());
}

TEST_CASE("cli and service give the same answers, default k is three") {
  Cli cli;
  REQUIRE(cli({"ingest", fixture_corpus()}).code == 0);
  REQUIRE(cli({"annotate"}).code == 0);
  auto config = concierge::Config::load(cli.config);
  concierge::service::Service svc(concierge::pipeline::load_snapshot(concierge::pipeline::Resources::load(config), true));

  auto rec = cli({"--json", "recommend", "T001"});
  REQUIRE(rec.code == 0);
  CHECK(json::parse(rec.out) == json::parse(svc.dispatch("GET", "/posts/T001/recommendations", {}, "").body));
  CHECK(json::parse(rec.out)["k"] == 3);

  auto stats = cli({"--json", "stats"});
  CHECK(json::parse(stats.out) == json::parse(svc.dispatch("GET", "/stats/topics", {}, "").body));

  auto k5 = cli({"--json", "recommend", "T001", "-k", "5", "--relaxation", "strict"});
  CHECK(json::parse(k5.out) ==
        json::parse(svc.dispatch("GET", "/posts/T001/recommendations", {{"k", "5"}, {"relaxation", "strict"}}, "").body));
}

TEST_CASE("export feedback") {
  Cli cli;
  REQUIRE(cli({"ingest", fixture_corpus()}).code == 0);
  REQUIRE(cli({"annotate"}).code == 0);
  auto config = concierge::Config::load(cli.config);
  {
    concierge::service::Service svc(concierge::pipeline::load_snapshot(concierge::pipeline::Resources::load(config), true));
    CHECK(svc.dispatch("POST", "/feedback", {}, R"({"post_id":"T003","field":"topic","proposed":"Availability"})").status ==
          201);
  }
  auto r = cli({"export-feedback"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["post_id"] == "T003");
  const auto out_file = (cli.dir / "fb.jsonl").string();
  CHECK(cli({"export-feedback", "--out", out_file}).code == 0);
  CHECK(testing::read_file(out_file) == r.out);
}

TEST_CASE("seed flag and relevance report") {
  Cli cli("relevance.keywords = vaccine, pfizer\n");
  auto r = cli({"--json", "--seed", "7", "ingest", fixture_corpus()});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.contains("relevance"));
}
