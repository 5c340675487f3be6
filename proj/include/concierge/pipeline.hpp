#pragma once

#include "concierge/classifier.hpp"
#include "concierge/config.hpp"
#include "concierge/corpus_store.hpp"
#include "concierge/embedding_index.hpp"
#include "concierge/entity_recognizer.hpp"
#include "concierge/feedback.hpp"
#include "concierge/sentiment.hpp"
#include "concierge/topic_lexicon.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace concierge::pipeline {

// Static inputs read from the data files named in the config.
struct Resources {
  Config config;
  topics::TopicLexicon lexicon;
  entities::Gazetteer base_gazetteer;
  entities::SeedList labeled_entities;
  sentiment::SentimentLexicon sentiment;
  embeddings::EmbeddingTable embeddings;

  static std::shared_ptr<const Resources> load(const Config& config);
};

// Files kept under the state directory.
struct StatePaths {
  std::filesystem::path dir;

  std::filesystem::path corpus() const { return dir / "corpus.jsonl"; }
  std::filesystem::path classifier() const { return dir / "classifier.json"; }
  std::filesystem::path gazetteer() const { return dir / "gazetteer.json"; }
  std::filesystem::path lda() const { return dir / "lda.json"; }
  std::filesystem::path feedback() const { return dir / "feedback.jsonl"; }
  std::filesystem::path snapshot() const { return dir / "snapshot.json"; }
};

struct AnnotateResult {
  std::vector<AnnotatedPost> posts;
  std::optional<classifier::ClassifierModel> classifier;  // none without both classes in the seed
  entities::Gazetteer gazetteer;
  std::optional<nlohmann::ordered_json> lda;
  std::size_t feedback_applied = 0;
};

// Runs every stage over the posts. Model labels from earlier runs are
// discarded; human labels stay; feedback (latest per post and field)
// overrides labels, topics and sentiment classes and augments the gazetteer.
// `generation` stamps every model version.
AnnotateResult annotate(std::vector<AnnotatedPost> posts, const Resources& resources,
                        const std::vector<feedback::FeedbackRecord>& feedback, std::int64_t generation);

// Immutable bundle every query is answered against.
struct PipelineSnapshot {
  std::uint64_t version = 0;  // 0: nothing annotated yet
  Timestamp built_at = 0;
  corpus::Snapshot corpus;
  std::shared_ptr<const Resources> resources;
  std::optional<classifier::ClassifierModel> classifier;
  entities::Gazetteer gazetteer;
  embeddings::VectorIndex vectors;
  std::optional<nlohmann::ordered_json> lda;
};

using SnapshotPtr = std::shared_ptr<const PipelineSnapshot>;

SnapshotPtr make_snapshot(std::uint64_t version, Timestamp built_at, std::vector<AnnotatedPost> posts,
                          std::shared_ptr<const Resources> resources,
                          std::optional<classifier::ClassifierModel> classifier, entities::Gazetteer gazetteer,
                          std::optional<nlohmann::ordered_json> lda);

// Reads the state directory. Without a recorded snapshot, `require_built`
// throws Error(kNotFound); otherwise a version-0 snapshot of the raw store
// is returned.
SnapshotPtr load_snapshot(std::shared_ptr<const Resources> resources, bool require_built);

// Loads the store and feedback log from disk, annotates, persists every
// state file and returns the new snapshot (version = previous + 1). Nothing
// is written when a stage throws.
SnapshotPtr rebuild(std::shared_ptr<const Resources> resources, std::uint64_t previous_version);

// Full annotation of free text against a snapshot's models; nothing stored.
nlohmann::ordered_json analyze_text(const std::string& text, const PipelineSnapshot& snapshot);

nlohmann::ordered_json gazetteer_to_json(const entities::Gazetteer& gazetteer);
entities::Gazetteer gazetteer_from_json(const nlohmann::json& j);

}  // namespace concierge::pipeline
