#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace concierge::topics {

struct LdaParams {
  std::size_t topics = 12;
  double alpha = 0.0;  // <= 0 selects 50 / topics
  double beta = 0.01;
  int iterations = 500;
  std::uint64_t seed = 42;

  double effective_alpha() const { return alpha > 0.0 ? alpha : 50.0 / static_cast<double>(topics); }
};

// Collapsed Gibbs state. Count matrices are kept exactly; phi/theta are
// smoothed point estimates derived from them.
class LdaModel {
 public:
  std::size_t num_topics() const { return topics_; }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  std::size_t num_documents() const { return docs_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const LdaParams& params() const { return params_; }
  int iterations_run() const { return iterations_run_; }

  // Index into the fitted documents for an input document; empty input
  // documents were skipped and have none.
  std::optional<std::size_t> document_for_input(std::size_t input_index) const;

  std::int64_t topic_word(std::size_t topic, std::size_t word) const { return topic_word_[topic * vocabulary_.size() + word]; }
  std::int64_t topic_total(std::size_t topic) const { return topic_total_[topic]; }
  std::int64_t doc_topic(std::size_t doc, std::size_t topic) const { return doc_topic_[doc * topics_ + topic]; }
  std::int64_t word_frequency(std::size_t word) const { return word_frequency_[word]; }

  double phi(std::size_t topic, std::size_t word) const;
  double theta(std::size_t doc, std::size_t topic) const;
  std::vector<double> phi_row(std::size_t topic) const;
  std::vector<double> theta_row(std::size_t doc) const;

  // Exact integer bookkeeping identities of the sampler state.
  bool counts_consistent() const;

  nlohmann::ordered_json to_json(std::size_t top_n = 10) const;

 private:
  friend LdaModel fit_lda(const std::vector<std::vector<std::string>>&, const LdaParams&,
                          const std::function<void(int, const LdaModel&)>&);

  LdaParams params_;
  std::size_t topics_ = 0;
  std::vector<std::string> vocabulary_;
  std::vector<std::vector<std::uint32_t>> docs_;
  std::vector<std::vector<std::uint32_t>> assignments_;
  std::vector<std::optional<std::size_t>> input_to_doc_;
  std::vector<std::int64_t> topic_word_;
  std::vector<std::int64_t> topic_total_;
  std::vector<std::int64_t> doc_topic_;
  std::vector<std::int64_t> word_frequency_;
  int iterations_run_ = 0;
};

using SweepObserver = std::function<void(int sweep, const LdaModel&)>;

// Sequential collapsed Gibbs sampling; deterministic for a given seed.
// Throws Error(kInvalidArgument) when topics < 2 or every document is empty.
LdaModel fit_lda(const std::vector<std::vector<std::string>>& documents, const LdaParams& params,
                 const SweepObserver& observer = {});

// Highest smoothed phi first, ties broken lexicographically.
std::vector<std::string> top_words(const LdaModel& model, std::size_t topic, std::size_t n);

// Drops LDA stopwords, bare numbers and one-character tokens; hashtags lose '#'.
std::vector<std::string> lda_document(const std::vector<std::string>& tokens);

}  // namespace concierge::topics
