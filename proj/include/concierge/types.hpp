#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace concierge {

using Timestamp = std::int64_t;  // UTC seconds since epoch

enum class Label { kMisleading, kNonMisleading, kUnlabeled };

// Where the current label came from. Human and feedback labels carry
// confidence 1.0 and are never overwritten by the classifier.
enum class LabelSource { kNone, kHuman, kFeedback, kModel };

enum class SentimentClass { kPositive, kNegative, kNeutral };

enum class EntityType { kVacType, kPerson, kOrg, kGpe, kCardinal, kMoney, kNorp, kEvent, kDate, kOther };

enum class MatchMethod { kExact, kFuzzy, kRule };

std::string_view to_string(Label label);
std::string_view to_string(LabelSource source);
std::string_view to_string(SentimentClass cls);
std::string_view to_string(EntityType type);
std::string_view to_string(MatchMethod method);

std::optional<Label> parse_label(std::string_view text);
std::optional<LabelSource> parse_label_source(std::string_view text);
std::optional<SentimentClass> parse_sentiment_class(std::string_view text);
std::optional<EntityType> parse_entity_type(std::string_view text);
std::optional<MatchMethod> parse_match_method(std::string_view text);

inline constexpr std::string_view kUnknownTopic = "Unknown";

struct RawPost {
  std::string id;
  std::string text;
  Timestamp timestamp = 0;
  std::string source;

  bool operator==(const RawPost&) const = default;
};

struct TopicLabel {
  std::string name{kUnknownTopic};
  std::vector<std::string> matched_terms;
  bool rescue = false;

  bool operator==(const TopicLabel&) const = default;
};

struct EntitySpan {
  std::string surface;     // joined tokens as they appear in the post
  std::string canonical;   // gazetteer surface the span resolved to; equals surface for rules
  std::size_t start = 0;   // token index, inclusive
  std::size_t end = 0;     // token index, exclusive
  EntityType type = EntityType::kOther;
  MatchMethod method = MatchMethod::kExact;
  double score = 1.0;

  bool operator==(const EntitySpan&) const = default;
};

// Matching key for entity overlap: canonical form with '#' and spaces
// removed, so "#pfizer", "phizer" and "pfizer" all meet at "pfizer".
std::string entity_key(const EntitySpan& span);
std::string normalize_entity_surface(std::string_view surface);

struct ModelVersions {
  std::int64_t classifier = 0;
  std::int64_t topics = 0;
  std::int64_t gazetteer = 0;
  std::int64_t sentiment = 0;
  std::int64_t embeddings = 0;

  bool operator==(const ModelVersions&) const = default;
};

struct Annotations {
  TopicLabel topic;
  std::vector<EntitySpan> entities;
  SentimentClass sentiment = SentimentClass::kNeutral;
  double compound = 0.0;
  double coverage = 0.0;  // fraction of tokens found in the embedding table
  ModelVersions versions;

  bool operator==(const Annotations&) const = default;
};

struct AnnotatedPost {
  RawPost post;
  Label label = Label::kUnlabeled;
  LabelSource label_source = LabelSource::kNone;
  double label_confidence = 0.0;
  std::optional<Annotations> annotations;

  bool human_labeled() const {
    return label_source == LabelSource::kHuman || label_source == LabelSource::kFeedback;
  }
  bool operator==(const AnnotatedPost&) const = default;
};

}  // namespace concierge
