#include "concierge/topic_lexicon.hpp"

#include "concierge/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace concierge::topics {

namespace {

bool has_upper(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

std::set<std::string> match_space(const textprep::TokenizedText& text) {
  std::set<std::string> space;
  std::vector<std::string> plain;
  plain.reserve(text.tokens.size());
  for (const auto& t : text.tokens) {
    space.insert(t);
    plain.emplace_back(textprep::strip_hash(t));
    space.insert(plain.back());
  }
  for (std::size_t n = 2; n <= 3; ++n) {
    for (auto& g : textprep::ngrams(plain, n)) space.insert(std::move(g));
  }
  return space;
}

// Returns the best entry index and its matched terms, or none on zero hits.
std::optional<std::pair<std::size_t, std::vector<std::string>>> best_match(
    const std::set<std::string>& space, const TopicLexicon& lexicon, bool synonyms) {
  std::optional<std::pair<std::size_t, std::vector<std::string>>> best;
  for (std::size_t i = 0; i < lexicon.entries().size(); ++i) {
    const auto& entry = lexicon.entries()[i];
    const auto& terms = synonyms ? entry.synonyms : entry.keywords;
    std::vector<std::string> hits;
    for (const auto& term : terms) {
      if (space.count(term) && std::find(hits.begin(), hits.end(), term) == hits.end()) hits.push_back(term);
    }
    if (hits.empty()) continue;
    if (!best || hits.size() > best->second.size()) best.emplace(i, std::move(hits));
  }
  return best;
}

}  // namespace

TopicLexicon::TopicLexicon(std::vector<TopicEntry> entries) : entries_(std::move(entries)) {
  std::set<std::string> names;
  for (const auto& e : entries_) {
    if (e.name.empty()) throw Error(ErrorCode::kValidation, "topic with empty name");
    if (!names.insert(e.name).second) throw Error(ErrorCode::kValidation, "duplicate topic name", e.name);
    if (e.name == kUnknownTopic && !e.keywords.empty()) {
      throw Error(ErrorCode::kValidation, "the Unknown topic cannot have keywords");
    }
    for (const auto* list : {&e.keywords, &e.synonyms}) {
      for (const auto& term : *list) {
        if (term.empty() || has_upper(term)) {
          throw Error(ErrorCode::kValidation, "topic terms must be non-empty lowercase", e.name + ": " + term);
        }
      }
    }
  }
}

TopicLexicon TopicLexicon::from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kValidation, "topic lexicon must be a JSON array");
  std::vector<TopicEntry> entries;
  try {
    for (const auto& item : j) {
      TopicEntry e;
      e.name = item.at("name").get<std::string>();
      e.keywords = item.value("keywords", std::vector<std::string>{});
      e.synonyms = item.value("synonyms", std::vector<std::string>{});
      entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kValidation, "malformed topic lexicon", ex.what());
  }
  return TopicLexicon(std::move(entries));
}

TopicLexicon TopicLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read topic lexicon", path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kValidation, "topic lexicon is not valid JSON", path.string() + ": " + ex.what());
  }
  return from_json(j);
}

bool TopicLexicon::contains(std::string_view name) const {
  if (name == kUnknownTopic) return true;
  return std::any_of(entries_.begin(), entries_.end(), [&](const TopicEntry& e) { return e.name == name; });
}

std::vector<std::string> TopicLexicon::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.name != kUnknownTopic) out.push_back(e.name);
  }
  out.emplace_back(kUnknownTopic);
  return out;
}

TopicLabel assign_topic(const textprep::TokenizedText& text, const TopicLexicon& lexicon) {
  TopicLabel label;
  if (text.empty()) return label;
  if (auto best = best_match(match_space(text), lexicon, false)) {
    label.name = lexicon.entries()[best->first].name;
    label.matched_terms = std::move(best->second);
  }
  return label;
}

std::optional<TopicLabel> synonym_rescue(const textprep::TokenizedText& text, const TopicLexicon& lexicon) {
  if (text.empty()) return std::nullopt;
  auto best = best_match(match_space(text), lexicon, true);
  if (!best) return std::nullopt;
  TopicLabel label;
  label.name = lexicon.entries()[best->first].name;
  label.matched_terms = std::move(best->second);
  label.rescue = true;
  return label;
}

TopicLabel label_topic(const textprep::TokenizedText& text, const TopicLexicon& lexicon) {
  TopicLabel label = assign_topic(text, lexicon);
  if (label.name != kUnknownTopic) return label;
  if (auto rescued = synonym_rescue(text, lexicon)) return *rescued;
  return label;
}

std::string format_percentage(std::size_t count, std::size_t total) {
  if (total == 0) return "0.00";
  // basis points, rounded half up
  const unsigned long long bp = (2ULL * 10000ULL * count + total) / (2ULL * total);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%llu.%02llu", bp / 100, bp % 100);
  return buf;
}

std::vector<TopicReportRow> topic_report(const corpus::CorpusView& view) {
  const auto stats = view.stats();
  std::vector<TopicReportRow> rows;
  for (const auto& [topic, count] : stats.per_topic) {
    rows.push_back({topic, count, format_percentage(count, stats.total)});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const TopicReportRow& a, const TopicReportRow& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.topic < b.topic;
  });
  return rows;
}

}  // namespace concierge::topics
