#include "concierge/types.hpp"

#include "concierge/errors.hpp"

#include <array>
#include <utility>

namespace concierge {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                        std::string_view text) {
  for (const auto& [value, name] : table) {
    if (name == text) return value;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<Label, std::string_view>, 3> kLabels{{
    {Label::kMisleading, "misleading"},
    {Label::kNonMisleading, "non-misleading"},
    {Label::kUnlabeled, "unlabeled"},
}};

constexpr std::array<std::pair<LabelSource, std::string_view>, 4> kSources{{
    {LabelSource::kNone, "none"},
    {LabelSource::kHuman, "human"},
    {LabelSource::kFeedback, "feedback"},
    {LabelSource::kModel, "model"},
}};

constexpr std::array<std::pair<SentimentClass, std::string_view>, 3> kSentiments{{
    {SentimentClass::kPositive, "positive"},
    {SentimentClass::kNegative, "negative"},
    {SentimentClass::kNeutral, "neutral"},
}};

constexpr std::array<std::pair<EntityType, std::string_view>, 10> kEntityTypes{{
    {EntityType::kVacType, "VAC_TYPE"},
    {EntityType::kPerson, "PERSON"},
    {EntityType::kOrg, "ORG"},
    {EntityType::kGpe, "GPE"},
    {EntityType::kCardinal, "CARDINAL"},
    {EntityType::kMoney, "MONEY"},
    {EntityType::kNorp, "NORP"},
    {EntityType::kEvent, "EVENT"},
    {EntityType::kDate, "DATE"},
    {EntityType::kOther, "OTHER"},
}};

constexpr std::array<std::pair<MatchMethod, std::string_view>, 3> kMethods{{
    {MatchMethod::kExact, "exact"},
    {MatchMethod::kFuzzy, "fuzzy"},
    {MatchMethod::kRule, "rule"},
}};

}  // namespace

std::string_view to_string(Label label) { return name_of(kLabels, label); }
std::string_view to_string(LabelSource source) { return name_of(kSources, source); }
std::string_view to_string(SentimentClass cls) { return name_of(kSentiments, cls); }
std::string_view to_string(EntityType type) { return name_of(kEntityTypes, type); }
std::string_view to_string(MatchMethod method) { return name_of(kMethods, method); }

std::optional<Label> parse_label(std::string_view text) { return lookup(kLabels, text); }
std::optional<LabelSource> parse_label_source(std::string_view text) { return lookup(kSources, text); }
std::optional<SentimentClass> parse_sentiment_class(std::string_view text) {
  return lookup(kSentiments, text);
}
std::optional<EntityType> parse_entity_type(std::string_view text) { return lookup(kEntityTypes, text); }
std::optional<MatchMethod> parse_match_method(std::string_view text) { return lookup(kMethods, text); }

std::string normalize_entity_surface(std::string_view surface) {
  std::string out;
  out.reserve(surface.size());
  for (char c : surface) {
    if (c == '#' || c == ' ') continue;
    out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
  }
  return out;
}

std::string entity_key(const EntitySpan& span) {
  return normalize_entity_surface(span.canonical.empty() ? span.surface : span.canonical);
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kContract: return "contract_violation";
    case ErrorCode::kValidation: return "validation_failed";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kInternal: return "internal";
  }
  return "internal";
}

}  // namespace concierge
