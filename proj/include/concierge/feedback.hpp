#pragma once

#include "concierge/corpus_store.hpp"
#include "concierge/entity_recognizer.hpp"
#include "concierge/types.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace concierge::feedback {

enum class Field { kLabel, kTopic, kSentiment, kEntity };

std::string_view to_string(Field f);
std::optional<Field> parse_field(std::string_view text);

// `proposed` and `prior` hold wire values: a label / topic / sentiment
// string, or {"surface", "type"} for entities (prior may be null).
struct FeedbackRecord {
  std::string id;
  std::string post_id;
  Field field = Field::kLabel;
  nlohmann::json proposed;
  nlohmann::json prior;
  Timestamp submitted_at = 0;
  std::string session;
};

nlohmann::ordered_json to_json(const FeedbackRecord& r);
FeedbackRecord record_from_json(const nlohmann::json& j);

// Checks a submission against the post it targets and fills in the prior
// value from the post. Unknown post: Error(kNotFound); bad field or value,
// or proposed equal to prior: Error(kValidation). `id` is left empty.
FeedbackRecord validate_submission(const nlohmann::json& body, const corpus::CorpusView& view,
                                   const std::vector<std::string>& topic_names, Timestamp now);

// Append-only JSONL; one writer at a time.
class FeedbackLog {
 public:
  explicit FeedbackLog(std::filesystem::path path);

  // Assigns the next id, appends and flushes.
  FeedbackRecord append(FeedbackRecord record);
  std::vector<FeedbackRecord> records() const;
  const std::filesystem::path& path() const { return path_; }

  // Malformed lines are skipped with a warning.
  static std::vector<FeedbackRecord> read(const std::filesystem::path& path);

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::size_t count_ = 0;
};

// Latest submission wins per (post, field), and per surface for entities;
// equal timestamps fall back to log order.
struct Resolved {
  std::map<std::string, Label> labels;
  std::map<std::string, std::string> topics;
  std::map<std::string, SentimentClass> sentiments;
  entities::SeedList entities;  // sorted by surface
};

Resolved resolve(const std::vector<FeedbackRecord>& records);

}  // namespace concierge::feedback
