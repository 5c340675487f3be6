#include "concierge/analytics.hpp"

#include "concierge/errors.hpp"
#include "concierge/timeutil.hpp"
#include "concierge/topic_lexicon.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace concierge::analytics {

namespace {

std::string_view topic_of(const AnnotatedPost& p) {
  return p.annotations ? std::string_view(p.annotations->topic.name) : kUnknownTopic;
}

void check_topic(const std::optional<std::string>& topic, const std::vector<std::string>& topics) {
  if (!topic || *topic == kUnknownTopic) return;
  if (std::find(topics.begin(), topics.end(), *topic) == topics.end()) {
    throw Error(ErrorCode::kNotFound, "unknown topic", *topic);
  }
}

bool in_topic(const AnnotatedPost& p, const std::optional<std::string>& topic) {
  return !topic || topic_of(p) == *topic;
}

std::vector<CloudEntry> top_entries(const std::map<std::pair<std::string, EntityType>, std::size_t>& counts,
                                    std::size_t n) {
  std::vector<CloudEntry> out;
  for (const auto& [key, count] : counts) out.push_back({key.first, key.second, count});
  std::sort(out.begin(), out.end(), [](const CloudEntry& a, const CloudEntry& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    if (a.surface != b.surface) return a.surface < b.surface;
    return a.type < b.type;
  });
  if (out.size() > n) out.resize(n);
  return out;
}

Timestamp floor_to(Timestamp ts, Granularity g) {
  switch (g) {
    case Granularity::kDay: return timeutil::floor_day(ts);
    case Granularity::kWeek: return timeutil::floor_week(ts);
    case Granularity::kMonth: return timeutil::floor_month(ts);
  }
  return ts;
}

Timestamp advance(Timestamp start, Granularity g) {
  switch (g) {
    case Granularity::kDay: return start + 86400;
    case Granularity::kWeek: return start + 7 * 86400;
    case Granularity::kMonth: return timeutil::next_month(start);
  }
  return start;
}

}  // namespace

TopicDistribution topic_distribution(const corpus::CorpusView& view, const std::vector<std::string>& topics) {
  TopicDistribution d;
  d.total = view.size();
  if (d.total == 0) return d;
  std::vector<std::string> order;
  for (const auto& t : topics) {
    if (t != kUnknownTopic) order.push_back(t);
  }
  std::map<std::string, TopicRow> rows;
  for (const auto& t : order) rows[t].topic = t;
  rows[std::string(kUnknownTopic)].topic = kUnknownTopic;
  std::set<std::string> extra;
  for (const auto& p : view.posts()) {
    const std::string name(topic_of(p));
    auto& row = rows[name];
    if (row.topic.empty()) {
      row.topic = name;
      extra.insert(name);
    }
    ++row.total;
    if (p.label == Label::kMisleading) ++row.misleading;
    else if (p.label == Label::kNonMisleading) ++row.non_misleading;
    else ++row.unlabeled;
  }
  order.insert(order.end(), extra.begin(), extra.end());
  order.emplace_back(kUnknownTopic);
  for (const auto& t : order) {
    auto row = rows[t];
    row.percentage = topics::format_percentage(row.total, d.total);
    d.rows.push_back(std::move(row));
  }
  std::stable_sort(d.rows.begin(), d.rows.end(), [](const TopicRow& a, const TopicRow& b) { return a.total > b.total; });
  return d;
}

EntityCloud entity_cloud(const corpus::CorpusView& view, const std::optional<std::string>& topic, std::size_t n,
                         const std::vector<std::string>& topics) {
  check_topic(topic, topics);
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "cloud size must be at least 1");
  EntityCloud cloud;
  cloud.topic = topic;
  cloud.n = n;
  std::map<std::pair<std::string, EntityType>, std::size_t> mis, non;
  for (const auto& p : view.posts()) {
    if (!p.annotations || !in_topic(p, topic) || p.label == Label::kUnlabeled) continue;
    std::set<std::pair<std::string, EntityType>> seen;
    for (const auto& span : p.annotations->entities) {
      seen.emplace(normalize_entity_surface(span.canonical.empty() ? span.surface : span.canonical), span.type);
    }
    auto& counts = p.label == Label::kMisleading ? mis : non;
    for (const auto& key : seen) ++counts[key];
  }
  cloud.misleading = top_entries(mis, n);
  cloud.non_misleading = top_entries(non, n);
  return cloud;
}

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::kDay: return "day";
    case Granularity::kWeek: return "week";
    case Granularity::kMonth: return "month";
  }
  return "day";
}

std::optional<Granularity> parse_granularity(std::string_view text) {
  if (text == "day") return Granularity::kDay;
  if (text == "week") return Granularity::kWeek;
  if (text == "month") return Granularity::kMonth;
  return std::nullopt;
}

TimeSeries timeline(const corpus::CorpusView& view, const std::optional<std::string>& topic, Granularity granularity,
                    const std::vector<std::string>& topics) {
  check_topic(topic, topics);
  TimeSeries series;
  series.topic = topic;
  series.granularity = granularity;
  std::map<Timestamp, Bucket> counts;
  for (const auto& p : view.posts()) {
    if (!in_topic(p, topic)) continue;
    auto& b = counts[floor_to(p.post.timestamp, granularity)];
    if (p.label == Label::kMisleading) ++b.misleading;
    else if (p.label == Label::kNonMisleading) ++b.non_misleading;
    else ++b.unlabeled;
  }
  if (counts.empty()) return series;
  const Timestamp last = counts.rbegin()->first;
  for (Timestamp t = counts.begin()->first; t <= last; t = advance(t, granularity)) {
    auto it = counts.find(t);
    Bucket b = it == counts.end() ? Bucket{} : it->second;
    b.start = t;
    series.buckets.push_back(b);
  }
  return series;
}

nlohmann::ordered_json to_json(const TopicDistribution& d) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : d.rows) {
    rows.push_back({{"topic", r.topic},
                    {"misleading", r.misleading},
                    {"non_misleading", r.non_misleading},
                    {"unlabeled", r.unlabeled},
                    {"total", r.total},
                    {"percentage", r.percentage}});
  }
  return {{"total", d.total}, {"rows", rows}};
}

nlohmann::ordered_json to_json(const EntityCloud& c) {
  auto list = [](const std::vector<CloudEntry>& entries) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
      arr.push_back({{"surface", e.surface}, {"type", std::string(concierge::to_string(e.type))}, {"frequency", e.frequency}});
    }
    return arr;
  };
  nlohmann::ordered_json j;
  j["topic"] = c.topic ? nlohmann::ordered_json(*c.topic) : nlohmann::ordered_json(nullptr);
  j["n"] = c.n;
  j["misleading"] = list(c.misleading);
  j["non_misleading"] = list(c.non_misleading);
  return j;
}

nlohmann::ordered_json to_json(const TimeSeries& s) {
  auto buckets = nlohmann::ordered_json::array();
  for (const auto& b : s.buckets) {
    buckets.push_back({{"start", timeutil::format_date(b.start)},
                       {"misleading", b.misleading},
                       {"non_misleading", b.non_misleading},
                       {"unlabeled", b.unlabeled}});
  }
  nlohmann::ordered_json j;
  j["topic"] = s.topic ? nlohmann::ordered_json(*s.topic) : nlohmann::ordered_json(nullptr);
  j["granularity"] = std::string(to_string(s.granularity));
  j["buckets"] = buckets;
  return j;
}

}  // namespace concierge::analytics
