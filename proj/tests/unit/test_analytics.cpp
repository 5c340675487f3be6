#include <doctest.h>

#include "concierge/analytics.hpp"
#include "concierge/errors.hpp"

using namespace concierge;
using namespace concierge::analytics;

namespace {

constexpr Timestamp kDay = 86400;
constexpr Timestamp kThu = 1617235200;  // 2021-04-01, a Thursday

struct P {
  std::string id;
  Label label;
  std::string topic;  // empty: unannotated
  Timestamp ts;
  std::vector<std::pair<std::string, EntityType>> entities = {};
};

corpus::CorpusView view(const std::vector<P>& ps) {
  std::vector<AnnotatedPost> posts;
  for (const auto& p : ps) {
    AnnotatedPost a;
    a.post = {p.id, "text", p.ts, ""};
    a.label = p.label;
    if (!p.topic.empty()) {
      a.annotations = Annotations{};
      a.annotations->topic.name = p.topic;
      for (const auto& [s, t] : p.entities) a.annotations->entities.push_back({s, s, 0, 1, t, MatchMethod::kExact, 1.0});
    }
    posts.push_back(a);
  }
  return corpus::CorpusView(posts, 1);
}

constexpr auto M = Label::kMisleading;
constexpr auto N = Label::kNonMisleading;
constexpr auto U = Label::kUnlabeled;
constexpr auto Vac = EntityType::kVacType;
const std::vector<std::string> kTopics = {"Shots", "Trials", "Politics"};

}  // namespace

TEST_CASE("topic distribution") {
  auto v = view({{"1", M, "Trials", kThu},
                 {"2", N, "Trials", kThu},
                 {"3", U, "Trials", kThu},
                 {"4", M, "Shots", kThu},
                 {"5", N, "", kThu},
                 {"6", M, "Other", kThu}});
  auto d = topic_distribution(v, kTopics);
  CHECK(d.total == 6);
  REQUIRE(d.rows.size() == 5);
  CHECK(d.rows[0] == TopicRow{"Trials", 1, 1, 1, 3, "50.00"});
  CHECK(d.rows[1] == TopicRow{"Shots", 1, 0, 0, 1, "16.67"});
  // equal totals keep lexicon order, then extras, then Unknown
  CHECK(d.rows[2].topic == "Other");
  CHECK(d.rows[3].topic == "Unknown");
  CHECK(d.rows[4] == TopicRow{"Politics", 0, 0, 0, 0, "0.00"});
  std::size_t sum = 0;
  for (const auto& r : d.rows) {
    CHECK(r.misleading + r.non_misleading + r.unlabeled == r.total);
    sum += r.total;
  }
  CHECK(sum == d.total);
  CHECK(topic_distribution(corpus::CorpusView{}, kTopics).rows.empty());
  CHECK(to_json(d).dump() == to_json(topic_distribution(v, kTopics)).dump());
}

TEST_CASE("entity cloud") {
  auto v = view({{"1", M, "Shots", kThu, {{"pfizer", Vac}, {"cdc", EntityType::kOrg}}},
                 {"2", M, "Shots", kThu, {{"Pfizer", Vac}, {"pfizer", Vac}}},
                 {"3", M, "Shots", kThu, {{"pfizer", Vac}, {"biden", EntityType::kPerson}}},
                 {"4", N, "Shots", kThu, {{"moderna", Vac}}},
                 {"5", U, "Shots", kThu, {{"moderna", Vac}}},
                 {"6", M, "Trials", kThu, {{"oxford", Vac}}}});
  auto c = entity_cloud(v, std::string("Shots"), 50, kTopics);
  REQUIRE(c.misleading.size() == 3);
  CHECK(c.misleading[0] == CloudEntry{"pfizer", Vac, 3});
  // frequency ties fall back to surface order
  CHECK(c.misleading[1].surface == "biden");
  CHECK(c.misleading[2].surface == "cdc");
  REQUIRE(c.non_misleading.size() == 1);
  CHECK(c.non_misleading[0] == CloudEntry{"moderna", Vac, 1});

  auto top1 = entity_cloud(v, std::string("Shots"), 1, kTopics);
  CHECK(top1.misleading.size() == 1);
  CHECK(top1.misleading[0].surface == "pfizer");

  auto all = entity_cloud(v, std::nullopt, 50, kTopics);
  CHECK(all.misleading.size() == 4);
  auto empty = entity_cloud(v, std::string("Politics"), 50, kTopics);
  CHECK(empty.misleading.empty());
  CHECK(empty.non_misleading.empty());
  CHECK_THROWS_AS(entity_cloud(v, std::string("Nope"), 5, kTopics), Error);
  CHECK_THROWS_AS(entity_cloud(v, std::nullopt, 0, kTopics), Error);
}

TEST_CASE("timeline buckets") {
  auto three = view({{"1", M, "Shots", kThu}, {"2", N, "Shots", kThu + kDay + 5}, {"3", U, "Shots", kThu + 2 * kDay}});
  auto s = timeline(three, std::nullopt, Granularity::kDay, kTopics);
  REQUIRE(s.buckets.size() == 3);
  CHECK(s.buckets[0] == Bucket{kThu, 1, 0, 0});
  CHECK(s.buckets[1] == Bucket{kThu + kDay, 0, 1, 0});

  auto gap = view({{"1", M, "Shots", kThu + 100}, {"2", M, "Trials", kThu + 2 * kDay + 100}});
  auto g = timeline(gap, std::nullopt, Granularity::kDay, kTopics);
  REQUIRE(g.buckets.size() == 3);
  CHECK(g.buckets[1] == Bucket{kThu + kDay, 0, 0, 0});
  CHECK(timeline(gap, std::string("Trials"), Granularity::kDay, kTopics).buckets.size() == 1);
  CHECK(timeline(gap, std::string("Politics"), Granularity::kDay, kTopics).buckets.empty());
  CHECK_THROWS_AS(timeline(gap, std::string("Nope"), Granularity::kDay, kTopics), Error);
}

TEST_CASE("weeks start on Monday, months on the first") {
  auto v = view({{"1", M, "Shots", kThu}, {"2", M, "Shots", kThu + 4 * kDay}, {"3", N, "Shots", kThu + 40 * kDay}});
  auto w = timeline(v, std::nullopt, Granularity::kWeek, kTopics);
  REQUIRE_FALSE(w.buckets.empty());
  CHECK(w.buckets[0].start == 1616976000);  // 2021-03-29
  CHECK(w.buckets[0].misleading == 1);
  CHECK(w.buckets[1].start == 1616976000 + 7 * kDay);
  CHECK(w.buckets[1].misleading == 1);
  auto m = timeline(v, std::nullopt, Granularity::kMonth, kTopics);
  REQUIRE(m.buckets.size() == 2);
  CHECK(m.buckets[0].start == kThu);
  CHECK(m.buckets[1].start == 1619827200);  // 2021-05-01
  auto j = to_json(m);
  CHECK(j["buckets"][1]["start"] == "2021-05-01");
}

TEST_CASE("timeline conserves counts") {
  std::vector<P> ps;
  for (int i = 0; i < 200; ++i) {
    ps.push_back({std::to_string(i), i % 3 == 0 ? M : (i % 3 == 1 ? N : U), kTopics[static_cast<std::size_t>(i % 3)],
                  kThu + static_cast<Timestamp>(i) * 37813});
  }
  auto v = view(ps);
  for (auto g : {Granularity::kDay, Granularity::kWeek, Granularity::kMonth}) {
    for (const auto& t : std::vector<std::optional<std::string>>{std::nullopt, "Shots", "Trials"}) {
      std::size_t sum = 0;
      for (const auto& b : timeline(v, t, g, kTopics).buckets) sum += b.misleading + b.non_misleading + b.unlabeled;
      CHECK(sum == (t ? 67u : 200u));
    }
  }
  CHECK(parse_granularity("week") == Granularity::kWeek);
  CHECK_FALSE(parse_granularity("year"));
}
