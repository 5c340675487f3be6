#pragma once

#include "concierge/textprep.hpp"
#include "concierge/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace concierge::entities {

using SeedList = std::vector<std::pair<std::string, EntityType>>;

// Surface form -> type. Every surface is reachable under its normalized key
// (lowercase, single spaces) and its space-stripped key.
class Gazetteer {
 public:
  struct Entry {
    std::string surface;
    EntityType type;
  };

  std::optional<Entry> lookup(std::string_view key) const;
  const std::map<std::string, EntityType>& surfaces() const { return surfaces_; }
  std::size_t size() const { return surfaces_.size(); }
  bool empty() const { return surfaces_.empty(); }

  bool operator==(const Gazetteer&) const = default;

 private:
  friend class GazetteerBuilder;
  std::map<std::string, EntityType> surfaces_;  // normalized surface -> type
  std::map<std::string, std::string> keys_;     // lookup key -> surface
};

std::string normalize_surface(std::string_view surface);

// JSON array of {"surface", "type"}; throws Error(kValidation) when a
// surface maps to two types within the file.
SeedList load_seed_file(const std::filesystem::path& path);
SeedList seed_list_from_json(const std::string& json_text, const std::string& origin = "<memory>");

// Cross-file conflicts: VAC_TYPE wins, otherwise the later file wins and a
// warning is logged.
Gazetteer build_gazetteer(const std::vector<SeedList>& files);
Gazetteer build_gazetteer_from_files(const std::vector<std::filesystem::path>& paths);

// Labeled entries override whatever the gazetteer said; the input is not
// modified. Conflicting duplicates inside `labeled` throw Error(kValidation).
Gazetteer augment(const Gazetteer& gazetteer, const SeedList& labeled);

struct FuzzyConfig {
  std::size_t max_edit = 1;
  std::size_t min_len = 4;
  std::size_t affix_min_len = 5;  // prefix/suffix of a VAC_TYPE surface
  bool enabled = true;
};

struct FuzzyHit {
  EntityType type;
  double score;
  std::string surface;
};

std::size_t levenshtein(std::string_view a, std::string_view b);

// Nearest surface wins (edit distance; affix hits count the missing
// characters), ties by lexicographic surface. score = 1 - d / max length.
std::optional<FuzzyHit> fuzzy_match(std::string_view token, const Gazetteer& gazetteer, const FuzzyConfig& config = {});

// Longest exact match first (3-, 2-, 1-grams, left to right,
// non-overlapping), then context rules for ambiguous surnames, then fuzzy
// unigrams, then DATE / MONEY / CARDINAL rules. Spans come back ordered.
std::vector<EntitySpan> recognize(const textprep::TokenizedText& text, const Gazetteer& gazetteer,
                                  const FuzzyConfig& config = {});

struct GoldSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  EntityType type = EntityType::kOther;

  auto operator<=>(const GoldSpan&) const = default;
};

struct EvalMetrics {
  double accuracy = 0.0;   // matched spans / gold spans
  double precision = 0.0;  // macro over types with at least one prediction
  double recall = 0.0;     // macro over types with at least one gold span
  double f1 = 0.0;         // macro over all types seen; undefined P or R counts as 0
};

// Span-level exact match on boundaries and type. `predicted` and `gold`
// are aligned post by post. Throws Error(kInvalidArgument, "empty gold set").
EvalMetrics evaluate(const std::vector<std::vector<GoldSpan>>& predicted,
                     const std::vector<std::vector<GoldSpan>>& gold);

std::vector<GoldSpan> to_gold(const std::vector<EntitySpan>& spans);

// JSONL {"id", "spans": [{"start", "end", "type"}]}.
std::map<std::string, std::vector<GoldSpan>> load_gold(const std::filesystem::path& path);

}  // namespace concierge::entities
