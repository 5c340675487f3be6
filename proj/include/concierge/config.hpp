#pragma once

#include "concierge/classifier.hpp"
#include "concierge/entity_recognizer.hpp"
#include "concierge/lda.hpp"
#include "concierge/recommender.hpp"
#include "concierge/textprep.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace concierge {

// Flat "key = value" file; '#' starts a comment, lists are comma separated.
// Relative paths resolve against the directory holding the file.
struct Config {
  std::filesystem::path state_dir;
  std::filesystem::path lexicon_path;
  std::vector<std::filesystem::path> gazetteer_paths;
  std::filesystem::path labeled_entities;  // optional seed list of human-labeled spans
  std::filesystem::path sentiment_lexicon;
  std::filesystem::path sentiment_boosters;
  std::filesystem::path sentiment_negations;
  std::filesystem::path embeddings_path;
  std::size_t embeddings_dim = 0;  // 0: take it from the file

  std::string host = "127.0.0.1";
  int port = 8080;

  std::size_t recommend_k = recommend::kDefaultK;
  recommend::Relaxation relaxation = recommend::Relaxation::kAllowSentimentDrop;

  classifier::SelfTrainConfig classifier;
  topics::LdaParams lda;
  bool lda_enabled = true;
  textprep::PrepOptions prep;
  entities::FuzzyConfig ner;
  std::vector<std::string> relevance_keywords;

  // Paths relative to `base_dir`, matching the layout of the shipped data/.
  static Config defaults(const std::filesystem::path& base_dir);
  static Config parse(std::string_view text, const std::filesystem::path& base_dir);
  static Config load(const std::filesystem::path& path);

  // Explicit path, else $CONCIERGE_CONFIG, else ./concierge.conf when it
  // exists, else defaults rooted at the working directory.
  static Config resolve(const std::filesystem::path& explicit_path);

  void set_seed(std::uint64_t seed) { lda.seed = seed; }
};

}  // namespace concierge
