#pragma once

#include "concierge/corpus_store.hpp"
#include "concierge/embedding_index.hpp"
#include "concierge/types.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace concierge::recommend {

// Ordered from strictest to loosest. A tier admits candidates sharing the
// topic and, respectively: sentiment and an entity / sentiment / nothing more.
enum class Relaxation { kStrict, kAllowEntityDrop, kAllowSentimentDrop };

std::string_view to_string(Relaxation r);
std::optional<Relaxation> parse_relaxation(std::string_view text);  // strict | entity-drop | sentiment-drop

inline constexpr std::size_t kDefaultK = 3;

struct Query {
  std::string post_id;
  Label target = Label::kNonMisleading;
  std::size_t k = kDefaultK;
  Relaxation relaxation = Relaxation::kStrict;
};

using EntityPair = std::pair<std::string, EntityType>;  // (entity_key, type)

std::set<EntityPair> entity_pairs(const Annotations& annotations);

struct MatchedCriteria {
  bool topic = false;
  std::vector<EntityPair> entities;  // shared pairs, sorted
  bool sentiment = false;

  bool operator==(const MatchedCriteria&) const = default;
};

struct Recommendation {
  std::string post_id;
  double similarity = 0.0;
  MatchedCriteria matched;
  Relaxation tier = Relaxation::kStrict;
  bool relaxed = false;

  bool operator==(const Recommendation&) const = default;
};

MatchedCriteria match(const Annotations& source, const Annotations& candidate);

// Ids (store order) of posts labeled `target` that satisfy at least the
// criteria of `tier`; the source is excluded. Throws Error(kContract,
// "unannotated source") when the source lacks annotations.
std::vector<std::string> filter_candidates(const AnnotatedPost& source, const corpus::CorpusView& view, Label target,
                                           Relaxation tier = Relaxation::kStrict);

// Strict candidates ranked by cosine first; while fewer than k and the
// query allows it, looser tiers append their own ranked candidates.
// Throws Error(kNotFound) for an unknown id, Error(kContract) when a
// rebuttal query starts from a post that is not labeled misleading, and
// Error(kInvalidArgument) when k == 0.
std::vector<Recommendation> recommend(const Query& query, const corpus::CorpusView& view,
                                      const embeddings::VectorIndex& index);

std::vector<Recommendation> similar_misleading(const std::string& post_id, std::size_t k,
                                               const corpus::CorpusView& view, const embeddings::VectorIndex& index,
                                               Relaxation relaxation = Relaxation::kStrict);

nlohmann::ordered_json to_json(const Recommendation& r);
nlohmann::ordered_json to_json(const std::vector<Recommendation>& list);

}  // namespace concierge::recommend
