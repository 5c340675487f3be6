#include <doctest.h>

#include "concierge/config.hpp"
#include "concierge/errors.hpp"
#include "helpers.hpp"

#include <cstdlib>

using namespace concierge;

TEST_CASE("defaults") {
  auto c = Config::defaults("/base");
  CHECK(c.state_dir == "/base/state");
  CHECK(c.lexicon_path == "/base/data/lexicon/topics.json");
  CHECK(c.gazetteer_paths.size() == 3);
  CHECK(c.recommend_k == 3);
  CHECK(c.relaxation == recommend::Relaxation::kAllowSentimentDrop);
  CHECK(c.classifier.tau == 0.9);
  CHECK(c.classifier.max_rounds == 10);
  CHECK(c.lda.topics == 12);
  CHECK(c.lda.beta == 0.01);
  CHECK(c.lda.iterations == 500);
  CHECK(c.ner.max_edit == 1);
  CHECK(c.ner.min_len == 4);
  CHECK(c.prep.keep_hashtags);
}

TEST_CASE("parse") {
  auto c = Config::parse(R"(
# comment
data_dir = other
state_dir = /abs/state
recommend.k = 5
recommend.relaxation = strict
classifier.tau = 0.95
lda.topics = 3
lda.enabled = false
seed = 7
relevance.keywords = vaccine, covid , pfizer
prep.keep_hashtags = false
ner.fuzzy = false
)", "/base");
  CHECK(c.lexicon_path == "/base/other/lexicon/topics.json");
  CHECK(c.state_dir == "/abs/state");
  CHECK(c.recommend_k == 5);
  CHECK(c.relaxation == recommend::Relaxation::kStrict);
  CHECK(c.classifier.tau == 0.95);
  CHECK(c.lda.topics == 3);
  CHECK_FALSE(c.lda_enabled);
  CHECK(c.lda.seed == 7);
  CHECK(c.relevance_keywords == std::vector<std::string>{"vaccine", "covid", "pfizer"});
  CHECK_FALSE(c.prep.keep_hashtags);
  CHECK_FALSE(c.ner.enabled);
}

TEST_CASE("bad configs are validation errors") {
  for (const char* text : {"nonsense.key = 1", "recommend.k = many", "recommend.relaxation = loose",
                           "classifier.tau = 0.2", "just a line", "recommend.k = 0", "lda.enabled = maybe"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(Config::parse(text, "/base"), Error);
  }
}

TEST_CASE("load and resolve") {
  testing::TempDir dir;
  auto path = testing::write_config(dir, "recommend.k = 4\n");
  CHECK(Config::load(path).recommend_k == 4);
  CHECK(Config::load(path).state_dir == dir / "state");
  CHECK_THROWS_AS(Config::load(dir / "missing.conf"), Error);

  testing::TempDir other;
  auto env_path = testing::write_config(other, "recommend.k = 6\n");
  ::setenv("CONCIERGE_CONFIG", env_path.c_str(), 1);
  CHECK(Config::resolve("").recommend_k == 6);
  CHECK(Config::resolve(path).recommend_k == 4);
  ::unsetenv("CONCIERGE_CONFIG");

  const auto cwd = std::filesystem::current_path();
  std::filesystem::current_path(dir.path());
  CHECK(Config::resolve("").recommend_k == 4);
  std::filesystem::remove(path);
  CHECK(Config::resolve("").recommend_k == 3);
  std::filesystem::current_path(cwd);
}

TEST_CASE("the shipped config file parses") {
  auto c = Config::load(testing::source_dir() / "concierge.conf");
  CHECK(c.embeddings_dim == 50);
  CHECK(c.recommend_k == 3);
  CHECK(std::filesystem::exists(c.embeddings_path));
  CHECK(std::filesystem::exists(c.lexicon_path));
  for (const auto& p : c.gazetteer_paths) CHECK(std::filesystem::exists(p));
}
