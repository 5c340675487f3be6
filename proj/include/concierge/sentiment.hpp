#pragma once

#include "concierge/textprep.hpp"
#include "concierge/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace concierge::sentiment {

// Rule constants of the VADER scheme.
struct Constants {
  double negation_scalar = -0.74;
  double booster_increment = 0.293;
  double caps_increment = 0.733;
  double exclamation_increment = 0.292;
  std::size_t max_exclamations = 4;
  double question_increment = 0.18;  // per '?' when there are 2 or 3
  double question_cap = 0.96;        // when there are more than 3
  double normalization_alpha = 15.0;
  double positive_threshold = 0.05;
  double negative_threshold = -0.05;
  double before_but = 0.5;
  double after_but = 1.5;
  std::size_t window = 3;
};

class SentimentLexicon {
 public:
  SentimentLexicon() = default;
  SentimentLexicon(std::unordered_map<std::string, double> valences, std::unordered_map<std::string, double> boosters,
                   std::unordered_set<std::string> negations);

  // lexicon: TSV "token<TAB>valence[<TAB>...]"; boosters: "token[<TAB>delta]"
  // (delta defaults to +booster_increment); negations: one token per line.
  static SentimentLexicon load(const std::filesystem::path& lexicon, const std::filesystem::path& boosters,
                               const std::filesystem::path& negations);

  std::optional<double> valence(std::string_view token) const;
  std::optional<double> booster(std::string_view token) const;
  bool is_negation(std::string_view token) const;

  const std::unordered_map<std::string, double>& valences() const { return valences_; }
  std::size_t size() const { return valences_.size(); }

 private:
  std::unordered_map<std::string, double> valences_;
  std::unordered_map<std::string, double> boosters_;
  std::unordered_set<std::string> negations_;
};

struct SentimentScore {
  double compound = 0.0;
  double pos = 0.0;
  double neu = 1.0;
  double neg = 0.0;
  SentimentClass cls = SentimentClass::kNeutral;
};

double normalize(double raw, double alpha = 15.0);

// compound >= +0.05 positive, <= -0.05 negative, otherwise neutral.
SentimentClass classify(double compound, const Constants& c = {});

SentimentScore score(const textprep::TokenizedText& text, const SentimentLexicon& lexicon, const Constants& c = {});

}  // namespace concierge::sentiment
