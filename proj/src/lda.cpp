#include "concierge/lda.hpp"

#include "concierge/errors.hpp"
#include "concierge/log.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <unordered_set>

namespace concierge::topics {

namespace {

const std::unordered_set<std::string_view>& lda_stopwords() {
  static const std::unordered_set<std::string_view> words = {
      "a",      "about",  "above",  "after",   "again",  "against", "all",    "am",     "an",     "and",
      "any",    "are",    "aren't", "as",      "at",     "be",      "because", "been",  "before", "being",
      "below",  "between", "both",  "but",     "by",     "can",     "can't",  "cannot", "could",  "did",
      "didn't", "do",     "does",   "doesn't", "doing",  "don't",   "down",   "during", "each",   "few",
      "for",    "from",   "further", "had",    "has",    "have",    "having", "he",     "her",    "here",
      "hers",   "him",    "his",    "how",     "i",      "i'm",     "if",     "in",     "into",   "is",
      "isn't",  "it",     "it's",   "its",     "just",   "me",      "more",   "most",   "my",     "no",
      "nor",    "not",    "now",    "of",      "off",    "on",      "once",   "only",   "or",     "other",
      "our",    "ours",   "out",    "over",    "own",    "same",    "she",    "should", "so",     "some",
      "such",   "than",   "that",   "the",     "their",  "theirs",  "them",   "then",   "there",  "these",
      "they",   "this",   "those",  "through", "to",     "too",     "under",  "until",  "up",     "very",
      "was",    "we",     "were",   "what",    "when",   "where",   "which",  "while",  "who",    "whom",
      "why",    "will",   "with",   "won't",   "would",  "you",     "your",   "yours",  "get",    "got",
      "rt",     "amp",    "via",    "us",      "one",    "also",    "like",   "many",   "much",   "really",
      "still",  "even",   "let",    "make",    "new",    "say",     "says",   "said",   "going",  "know",
  };
  return words;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<std::string> lda_document(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    std::string_view w = t;
    if (!w.empty() && w.front() == '#') w.remove_prefix(1);
    if (w.size() < 2) continue;
    if (std::all_of(w.begin(), w.end(), [](char c) { return (c >= '0' && c <= '9') || c == ',' || c == '.'; })) {
      continue;
    }
    if (lda_stopwords().count(w)) continue;
    out.emplace_back(w);
  }
  return out;
}

std::optional<std::size_t> LdaModel::document_for_input(std::size_t input_index) const {
  return input_index < input_to_doc_.size() ? input_to_doc_[input_index] : std::nullopt;
}

double LdaModel::phi(std::size_t topic, std::size_t word) const {
  const double v = static_cast<double>(vocabulary_.size());
  return (static_cast<double>(topic_word(topic, word)) + params_.beta) /
         (static_cast<double>(topic_total_[topic]) + v * params_.beta);
}

double LdaModel::theta(std::size_t doc, std::size_t topic) const {
  const double alpha = params_.effective_alpha();
  return (static_cast<double>(doc_topic(doc, topic)) + alpha) /
         (static_cast<double>(docs_[doc].size()) + static_cast<double>(topics_) * alpha);
}

std::vector<double> LdaModel::phi_row(std::size_t topic) const {
  std::vector<double> row(vocabulary_.size());
  for (std::size_t w = 0; w < row.size(); ++w) row[w] = phi(topic, w);
  return row;
}

std::vector<double> LdaModel::theta_row(std::size_t doc) const {
  std::vector<double> row(topics_);
  for (std::size_t k = 0; k < topics_; ++k) row[k] = theta(doc, k);
  return row;
}

bool LdaModel::counts_consistent() const {
  const std::size_t v = vocabulary_.size();
  for (std::size_t w = 0; w < v; ++w) {
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < topics_; ++k) {
      if (topic_word(k, w) < 0) return false;
      sum += topic_word(k, w);
    }
    if (sum != word_frequency_[w]) return false;
  }
  for (std::size_t k = 0; k < topics_; ++k) {
    std::int64_t sum = 0;
    for (std::size_t w = 0; w < v; ++w) sum += topic_word(k, w);
    if (sum != topic_total_[k]) return false;
  }
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < topics_; ++k) {
      if (doc_topic(d, k) < 0) return false;
      sum += doc_topic(d, k);
    }
    if (sum != static_cast<std::int64_t>(docs_[d].size())) return false;
  }
  return true;
}

LdaModel fit_lda(const std::vector<std::vector<std::string>>& documents, const LdaParams& params,
                 const SweepObserver& observer) {
  if (params.topics < 2) throw Error(ErrorCode::kInvalidArgument, "LDA needs at least two topics");
  if (!(params.beta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "LDA beta must be positive");
  if (params.iterations < 0) throw Error(ErrorCode::kInvalidArgument, "LDA iterations must be non-negative");

  LdaModel m;
  m.params_ = params;
  m.params_.alpha = params.effective_alpha();
  m.topics_ = params.topics;

  std::map<std::string, std::uint32_t> vocab;
  for (const auto& doc : documents) {
    for (const auto& w : doc) vocab.emplace(w, 0);
  }
  std::uint32_t next = 0;
  for (auto& [w, id] : vocab) {
    id = next++;
    m.vocabulary_.push_back(w);
  }

  std::size_t skipped = 0;
  for (const auto& doc : documents) {
    if (doc.empty()) {
      m.input_to_doc_.push_back(std::nullopt);
      ++skipped;
      continue;
    }
    m.input_to_doc_.push_back(m.docs_.size());
    std::vector<std::uint32_t> ids;
    ids.reserve(doc.size());
    for (const auto& w : doc) ids.push_back(vocab.at(w));
    m.docs_.push_back(std::move(ids));
  }
  if (skipped) log::warn("LDA skipped " + std::to_string(skipped) + " empty document(s)");
  if (m.docs_.empty()) throw Error(ErrorCode::kInvalidArgument, "LDA corpus has no non-empty documents");

  const std::size_t T = m.topics_;
  const std::size_t V = m.vocabulary_.size();
  const std::size_t D = m.docs_.size();
  m.topic_word_.assign(T * V, 0);
  m.topic_total_.assign(T, 0);
  m.doc_topic_.assign(D * T, 0);
  m.word_frequency_.assign(V, 0);

  std::mt19937_64 rng(params.seed);
  m.assignments_.resize(D);
  for (std::size_t d = 0; d < D; ++d) {
    m.assignments_[d].resize(m.docs_[d].size());
    for (std::size_t i = 0; i < m.docs_[d].size(); ++i) {
      const std::uint32_t w = m.docs_[d][i];
      const auto k = static_cast<std::uint32_t>(rng() % T);
      m.assignments_[d][i] = k;
      ++m.topic_word_[k * V + w];
      ++m.topic_total_[k];
      ++m.doc_topic_[d * T + k];
      ++m.word_frequency_[w];
    }
  }

  const double alpha = m.params_.alpha;
  const double beta = params.beta;
  const double vbeta = static_cast<double>(V) * beta;
  std::vector<double> cdf(T);
  for (int sweep = 1; sweep <= params.iterations; ++sweep) {
    for (std::size_t d = 0; d < D; ++d) {
      auto& z = m.assignments_[d];
      for (std::size_t i = 0; i < z.size(); ++i) {
        const std::uint32_t w = m.docs_[d][i];
        std::uint32_t k = z[i];
        --m.topic_word_[k * V + w];
        --m.topic_total_[k];
        --m.doc_topic_[d * T + k];

        double acc = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
          acc += (static_cast<double>(m.doc_topic_[d * T + t]) + alpha) *
                 (static_cast<double>(m.topic_word_[t * V + w]) + beta) /
                 (static_cast<double>(m.topic_total_[t]) + vbeta);
          cdf[t] = acc;
        }
        const double u = uniform01(rng) * acc;
        k = static_cast<std::uint32_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (k >= T) k = static_cast<std::uint32_t>(T - 1);

        z[i] = k;
        ++m.topic_word_[k * V + w];
        ++m.topic_total_[k];
        ++m.doc_topic_[d * T + k];
      }
    }
    m.iterations_run_ = sweep;
    if (observer) observer(sweep, m);
  }
  return m;
}

std::vector<std::string> top_words(const LdaModel& model, std::size_t topic, std::size_t n) {
  if (topic >= model.num_topics()) throw Error(ErrorCode::kInvalidArgument, "topic index out of range");
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "n must be at least 1");
  std::vector<std::size_t> order(model.vocabulary_size());
  std::iota(order.begin(), order.end(), 0);
  // Smoothed phi is monotone in the raw count within a topic, so compare
  // counts to keep ties exact.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ca = model.topic_word(topic, a);
    const auto cb = model.topic_word(topic, b);
    if (ca != cb) return ca > cb;
    return model.vocabulary()[a] < model.vocabulary()[b];
  });
  if (order.size() > n) order.resize(n);
  std::vector<std::string> words;
  words.reserve(order.size());
  for (auto i : order) words.push_back(model.vocabulary()[i]);
  return words;
}

nlohmann::ordered_json LdaModel::to_json(std::size_t top_n) const {
  nlohmann::ordered_json j;
  j["format"] = "concierge-lda";
  j["topics"] = topics_;
  j["alpha"] = params_.effective_alpha();
  j["beta"] = params_.beta;
  j["iterations"] = iterations_run_;
  j["seed"] = params_.seed;
  j["vocabulary"] = vocabulary_;
  j["topic_totals"] = topic_total_;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < topics_; ++k) {
    std::vector<std::int64_t> row(topic_word_.begin() + static_cast<std::ptrdiff_t>(k * vocabulary_.size()),
                                  topic_word_.begin() + static_cast<std::ptrdiff_t>((k + 1) * vocabulary_.size()));
    rows.push_back(std::move(row));
  }
  j["topic_word_counts"] = std::move(rows);
  nlohmann::ordered_json tops = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < topics_; ++k) tops.push_back(top_words(*this, k, top_n));
  j["top_words"] = std::move(tops);
  return j;
}

}  // namespace concierge::topics
