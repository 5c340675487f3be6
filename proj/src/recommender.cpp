#include "concierge/recommender.hpp"

#include "concierge/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace concierge::recommend {

std::string_view to_string(Relaxation r) {
  switch (r) {
    case Relaxation::kStrict: return "strict";
    case Relaxation::kAllowEntityDrop: return "entity-drop";
    case Relaxation::kAllowSentimentDrop: return "sentiment-drop";
  }
  return "strict";
}

std::optional<Relaxation> parse_relaxation(std::string_view text) {
  if (text == "strict") return Relaxation::kStrict;
  if (text == "entity-drop") return Relaxation::kAllowEntityDrop;
  if (text == "sentiment-drop") return Relaxation::kAllowSentimentDrop;
  return std::nullopt;
}

std::set<EntityPair> entity_pairs(const Annotations& annotations) {
  std::set<EntityPair> out;
  for (const auto& span : annotations.entities) {
    auto key = entity_key(span);
    if (!key.empty()) out.emplace(std::move(key), span.type);
  }
  return out;
}

MatchedCriteria match(const Annotations& source, const Annotations& candidate) {
  MatchedCriteria m;
  m.topic = source.topic.name == candidate.topic.name;
  m.sentiment = source.sentiment == candidate.sentiment;
  const auto a = entity_pairs(source);
  const auto b = entity_pairs(candidate);
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m.entities));
  return m;
}

namespace {

bool admits(const MatchedCriteria& m, Relaxation tier) {
  switch (tier) {
    case Relaxation::kStrict: return m.topic && m.sentiment && !m.entities.empty();
    case Relaxation::kAllowEntityDrop: return m.topic && m.sentiment;
    case Relaxation::kAllowSentimentDrop: return m.topic;
  }
  return false;
}

}  // namespace

std::vector<std::string> filter_candidates(const AnnotatedPost& source, const corpus::CorpusView& view, Label target,
                                           Relaxation tier) {
  if (!source.annotations) throw Error(ErrorCode::kContract, "unannotated source", source.post.id);
  std::vector<std::string> out;
  for (const auto& p : view.posts()) {
    if (p.post.id == source.post.id || p.label != target || !p.annotations) continue;
    if (admits(match(*source.annotations, *p.annotations), tier)) out.push_back(p.post.id);
  }
  return out;
}

std::vector<Recommendation> recommend(const Query& query, const corpus::CorpusView& view,
                                      const embeddings::VectorIndex& index) {
  if (query.k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  const AnnotatedPost* source = view.find(query.post_id);
  if (!source) throw Error(ErrorCode::kNotFound, "unknown post", query.post_id);
  if (query.target == Label::kNonMisleading && source->label != Label::kMisleading) {
    throw Error(ErrorCode::kContract, "rebuttals are only offered for misleading posts", query.post_id);
  }
  if (!source->annotations) throw Error(ErrorCode::kContract, "unannotated source", query.post_id);
  const embeddings::PostVector* qv = index.find(query.post_id);
  if (!qv) throw Error(ErrorCode::kContract, "source has no embedding", query.post_id);

  std::vector<Recommendation> out;
  std::unordered_set<std::string> taken;
  for (auto tier : {Relaxation::kStrict, Relaxation::kAllowEntityDrop, Relaxation::kAllowSentimentDrop}) {
    if (static_cast<int>(tier) > static_cast<int>(query.relaxation) || out.size() >= query.k) break;
    auto ids = filter_candidates(*source, view, query.target, tier);
    std::erase_if(ids, [&](const std::string& id) { return taken.count(id) > 0; });
    for (auto& n : index.top_k(*qv, ids, query.k - out.size())) {
      Recommendation r;
      r.matched = match(*source->annotations, *view.find(n.id)->annotations);
      r.post_id = std::move(n.id);
      r.similarity = n.similarity;
      r.tier = tier;
      r.relaxed = tier != Relaxation::kStrict;
      taken.insert(r.post_id);
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<Recommendation> similar_misleading(const std::string& post_id, std::size_t k,
                                               const corpus::CorpusView& view, const embeddings::VectorIndex& index,
                                               Relaxation relaxation) {
  return recommend(Query{post_id, Label::kMisleading, k, relaxation}, view, index);
}

nlohmann::ordered_json to_json(const Recommendation& r) {
  nlohmann::ordered_json entities = nlohmann::ordered_json::array();
  for (const auto& [surface, type] : r.matched.entities) {
    entities.push_back({{"surface", surface}, {"type", std::string(concierge::to_string(type))}});
  }
  return {{"post_id", r.post_id},
          {"similarity", r.similarity},
          {"matched_criteria", {{"topic", r.matched.topic}, {"entities", entities}, {"sentiment", r.matched.sentiment}}},
          {"tier", std::string(to_string(r.tier))},
          {"relaxed", r.relaxed}};
}

nlohmann::ordered_json to_json(const std::vector<Recommendation>& list) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : list) arr.push_back(to_json(r));
  return arr;
}

}  // namespace concierge::recommend
