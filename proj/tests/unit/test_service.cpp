#include <doctest.h>

#include "concierge/service.hpp"
#include "helpers.hpp"

#include <httplib.h>

#include <atomic>
#include <thread>

using namespace concierge;
using namespace concierge::service;
using nlohmann::json;

namespace {

struct Env {
  testing::TempDir dir;
  std::shared_ptr<const pipeline::Resources> resources;

  Env() {
    resources = pipeline::Resources::load(testing::test_config(dir / "state"));
    std::filesystem::create_directories(dir / "state");
    corpus::CorpusStore store;
    store.ingest(testing::data_dir() / "fixtures" / "corpus.jsonl", corpus::Format::kJsonl);
    store.save(pipeline::StatePaths{dir / "state"}.corpus());
    pipeline::rebuild(resources, 0);
  }

  pipeline::SnapshotPtr load() const { return pipeline::load_snapshot(resources, true); }
};

json get(Service& s, const std::string& path, const QueryParams& q = {}, int expect = 200) {
  auto r = s.dispatch("GET", path, q, "");
  CHECK(r.status == expect);
  return json::parse(r.body);
}

}  // namespace

TEST_CASE("read endpoints") {
  Env env;
  Service s(env.load());
  CHECK(get(s, "/health")["status"] == "ok");
  CHECK(get(s, "/health")["snapshot_version"] == 1);

  auto topics = get(s, "/stats/topics");
  CHECK(topics["total"] == 66);
  std::size_t sum = 0;
  for (const auto& row : topics["rows"]) sum += row["total"].get<std::size_t>();
  CHECK(sum == 66);

  CHECK(get(s, "/stats/entities", {{"topic", "Shots"}, {"n", "5"}})["n"] == 5);
  CHECK(get(s, "/stats/timeline", {{"granularity", "week"}})["granularity"] == "week");

  auto page = get(s, "/posts", {{"label", "misleading"}, {"page_size", "5"}});
  CHECK(page["posts"].size() <= 5);
  CHECK(page["total"].get<std::size_t>() >= page["posts"].size());
  for (const auto& p : page["posts"]) CHECK(p["label"] == "misleading");

  CHECK(get(s, "/posts/T001")["post"]["id"] == "T001");
  auto rec = get(s, "/posts/T001/recommendations");
  CHECK(rec["k"] == 3);
  CHECK(rec["relaxation"] == "sentiment-drop");
  CHECK(rec["recommendations"].size() <= 3);
  auto strict = get(s, "/posts/T001/recommendations", {{"k", "5"}, {"relaxation", "strict"}});
  for (const auto& r : strict["recommendations"]) CHECK(r["tier"] == "strict");
}

TEST_CASE("errors are JSON with the mapped status") {
  Env env;
  Service s(env.load());
  auto nf = get(s, "/posts/NOPE", {}, 404);
  CHECK(nf["code"] == "not_found");
  CHECK(nf.contains("message"));
  get(s, "/nowhere", {}, 404);
  get(s, "/posts", {{"page_size", "501"}}, 400);
  get(s, "/posts", {{"page", "zero"}}, 400);
  get(s, "/posts/T001/recommendations", {{"k", "0"}}, 400);
  get(s, "/stats/entities", {{"topic", "Nope"}}, 404);
  get(s, "/posts/T002/recommendations", {}, 409);
  CHECK(s.dispatch("POST", "/feedback", {}, "{not json").status == 400);
  CHECK(s.dispatch("POST", "/feedback", {}, R"({"post_id":"T001","field":"label","proposed":"misleading"})").status == 422);
  CHECK(s.dispatch("POST", "/analyze", {}, R"({"txt":"x"})").status == 422);
  CHECK(s.dispatch("DELETE", "/posts/T001", {}, "").status == 404);
  CHECK(http_status(ErrorCode::kIo) == 500);
  CHECK(http_status(ErrorCode::kContract) == 409);
}

TEST_CASE("feedback waits for retrain") {
  Env env;
  Service s(env.load());
  const auto prior = get(s, "/posts/T005")["post"]["label"].get<std::string>();
  const std::string proposed = prior == "misleading" ? "non-misleading" : "misleading";
  auto r = s.dispatch("POST", "/feedback", {}, json{{"post_id", "T005"}, {"field", "label"}, {"proposed", proposed}}.dump());
  CHECK(r.status == 201);
  auto body = json::parse(r.body);
  CHECK(body["feedback"]["prior"] == prior);
  CHECK(body["feedback"]["id"] == "fb-000001");
  CHECK(get(s, "/posts/T005")["post"]["label"] == prior);

  auto rt = json::parse(s.dispatch("POST", "/admin/retrain", {}, "").body);
  CHECK(rt["snapshot_version"] == 2);
  CHECK(rt["previous_version"] == 1);
  auto post = get(s, "/posts/T005")["post"];
  CHECK(post["label"] == proposed);
  CHECK(post["label_source"] == "feedback");
  CHECK(post["label_confidence"] == 1.0);
}

TEST_CASE("analyze") {
  Env env;
  Service s(env.load());
  auto r = s.dispatch("POST", "/analyze", {}, R"({"text":"The Pfizer shot is NOT safe!!"})");
  CHECK(r.status == 200);
  auto a = json::parse(r.body)["analysis"];
  CHECK(a["entities"][0]["type"] == "VAC_TYPE");
  CHECK(a["sentiment"]["class"].is_string());
}

TEST_CASE("readers never see a mix of snapshots during retrain") {
  Env env;
  Service s(env.load());
  std::atomic<bool> stop{false};
  std::atomic<int> mixed{0}, responses{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 100; ++t) {
    readers.emplace_back([&, t] {
      while (!stop.load()) {
        auto r = s.dispatch("GET", "/posts", {{"page_size", "500"}}, "");
        auto j = json::parse(r.body);
        const auto v = j["snapshot_version"].get<std::int64_t>();
        for (const auto& p : j["posts"]) {
          for (const auto& [k, pv] : p["annotations"]["versions"].items()) {
            if (pv.get<std::int64_t>() != v) ++mixed;
          }
        }
        ++responses;
        if (t % 10 == 0) std::this_thread::yield();
      }
    });
  }
  for (int i = 0; i < 3; ++i) s.retrain();
  stop = true;
  for (auto& r : readers) r.join();
  CHECK(mixed.load() == 0);
  CHECK(responses.load() > 0);
  CHECK(s.current()->version == 4);
}

TEST_CASE("feedback log survives a restart") {
  Env env;
  {
    Service s(env.load());
    CHECK(s.dispatch("POST", "/feedback", {},
                     json{{"post_id", "T010"}, {"field", "entity"}, {"proposed", {{"surface", "ohio"}, {"type", "GPE"}}}}.dump())
              .status == 201);
  }
  Service again(env.load());
  CHECK(feedback::FeedbackLog::read(pipeline::StatePaths{env.dir / "state"}.feedback()).size() == 1);
  auto next = again.retrain();
  CHECK(next->gazetteer.lookup("ohio")->type == EntityType::kGpe);
  auto r = again.dispatch("POST", "/feedback", {}, json{{"post_id", "T001"}, {"field", "topic"}, {"proposed", "Availability"}}.dump());
  CHECK(r.status == 201);
  CHECK(json::parse(r.body)["feedback"]["id"] == "fb-000002");
}

TEST_CASE("real HTTP on an ephemeral port") {
  Env env;
  Service s(env.load());
  HttpServer server(s);
  const int port = server.start("127.0.0.1", 0);
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(json::parse(health->body)["status"] == "ok");
  auto rec = client.Get("/posts/T001/recommendations?k=2&relaxation=strict");
  REQUIRE(rec);
  CHECK(json::parse(rec->body)["k"] == 2);
  auto missing = client.Get("/posts/NOPE");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(missing->get_header_value("Content-Type").find("application/json") != std::string::npos);
  auto bad = client.Post("/feedback", R"({"post_id":"T001"})", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 422);
  server.stop();
}
