#pragma once

#include "concierge/corpus_store.hpp"
#include "concierge/types.hpp"

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace concierge::analytics {

struct TopicRow {
  std::string topic;
  std::size_t misleading = 0;
  std::size_t non_misleading = 0;
  std::size_t unlabeled = 0;
  std::size_t total = 0;
  std::string percentage;  // of the snapshot total, two decimals

  bool operator==(const TopicRow&) const = default;
};

struct TopicDistribution {
  std::size_t total = 0;
  std::vector<TopicRow> rows;
};

// One row per name in `topics` plus Unknown (and any other topic seen in
// the snapshot), by total descending; ties keep `topics` order. An empty
// snapshot yields no rows. Unannotated posts count as Unknown.
TopicDistribution topic_distribution(const corpus::CorpusView& view, const std::vector<std::string>& topics);

struct CloudEntry {
  std::string surface;
  EntityType type = EntityType::kOther;
  std::size_t frequency = 0;  // posts mentioning the entity

  bool operator==(const CloudEntry&) const = default;
};

struct EntityCloud {
  std::optional<std::string> topic;
  std::size_t n = 0;
  std::vector<CloudEntry> misleading;
  std::vector<CloudEntry> non_misleading;
};

inline constexpr std::size_t kDefaultCloudSize = 50;

// Top n per label by frequency, ties by surface. `topic` must be one of
// `topics` or Unknown, otherwise Error(kNotFound).
EntityCloud entity_cloud(const corpus::CorpusView& view, const std::optional<std::string>& topic, std::size_t n,
                         const std::vector<std::string>& topics);

enum class Granularity { kDay, kWeek, kMonth };

std::string_view to_string(Granularity g);
std::optional<Granularity> parse_granularity(std::string_view text);

struct Bucket {
  Timestamp start = 0;
  std::size_t misleading = 0;
  std::size_t non_misleading = 0;
  std::size_t unlabeled = 0;

  bool operator==(const Bucket&) const = default;
};

struct TimeSeries {
  std::optional<std::string> topic;
  Granularity granularity = Granularity::kDay;
  std::vector<Bucket> buckets;  // contiguous, zero-filled
};

TimeSeries timeline(const corpus::CorpusView& view, const std::optional<std::string>& topic, Granularity granularity,
                    const std::vector<std::string>& topics);

nlohmann::ordered_json to_json(const TopicDistribution& d);
nlohmann::ordered_json to_json(const EntityCloud& c);
nlohmann::ordered_json to_json(const TimeSeries& s);

}  // namespace concierge::analytics
