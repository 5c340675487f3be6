#pragma once

#include "concierge/corpus_store.hpp"
#include "concierge/textprep.hpp"
#include "concierge/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace concierge::topics {

struct TopicEntry {
  std::string name;
  std::vector<std::string> keywords;
  std::vector<std::string> synonyms;

  bool operator==(const TopicEntry&) const = default;
};

// Ordered: earlier entries win ties in assignment.
class TopicLexicon {
 public:
  TopicLexicon() = default;
  // Throws Error(kValidation) on duplicate names, upper-case terms, or an
  // "Unknown" entry that carries keywords.
  explicit TopicLexicon(std::vector<TopicEntry> entries);

  static TopicLexicon from_json(const nlohmann::json& j);
  static TopicLexicon load(const std::filesystem::path& path);

  const std::vector<TopicEntry>& entries() const { return entries_; }
  bool contains(std::string_view name) const;  // Unknown always included
  std::vector<std::string> names() const;      // lexicon order, then Unknown

  bool operator==(const TopicLexicon&) const = default;

 private:
  std::vector<TopicEntry> entries_;
};

// Keyword presence over tokens (hashtags also without '#') and 2-/3-grams.
// Most distinct hits wins; ties go to the earlier lexicon entry.
TopicLabel assign_topic(const textprep::TokenizedText& text, const TopicLexicon& lexicon);

// Same procedure over synonym sets, for posts left Unknown.
std::optional<TopicLabel> synonym_rescue(const textprep::TokenizedText& text, const TopicLexicon& lexicon);

// assign_topic, then synonym_rescue when the result is Unknown.
TopicLabel label_topic(const textprep::TokenizedText& text, const TopicLexicon& lexicon);

struct TopicReportRow {
  std::string topic;
  std::size_t count = 0;
  std::string percentage;  // two decimals, e.g. "28.92"

  bool operator==(const TopicReportRow&) const = default;
};

// Rows by count descending, ties by name; percentages of the snapshot total.
std::vector<TopicReportRow> topic_report(const corpus::CorpusView& view);

// 100 * count / total rounded half-up to two decimals, in exact integer arithmetic.
std::string format_percentage(std::size_t count, std::size_t total);

}  // namespace concierge::topics
