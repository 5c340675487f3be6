#include "concierge/classifier.hpp"

#include "concierge/errors.hpp"
#include "concierge/timeutil.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

namespace concierge::classifier {

namespace {

const std::unordered_set<std::string_view>& stopwords() {
  static const std::unordered_set<std::string_view> words = {
      "a",     "an",    "the",   "and",   "or",    "but",  "if",    "of",    "at",    "by",   "for",  "with",
      "about", "to",    "from",  "in",    "on",    "is",   "are",   "was",   "were",  "be",   "been", "being",
      "am",    "it",    "its",   "it's",  "this",  "that", "these", "those", "i",     "me",   "my",   "we",
      "our",   "you",   "your",  "he",    "him",   "his",  "she",   "her",   "they",  "them", "their", "what",
      "which", "who",   "whom",  "as",    "so",    "than", "too",   "very",  "can",   "will", "just", "do",
      "does",  "did",   "have",  "has",   "had",   "there", "here", "then",  "into",  "over", "out",  "up",
      "again", "once",  "all",   "any",   "both",  "each", "more",  "most",  "other", "some", "such", "own",
      "same",  "s",     "t",     "rt",    "amp",
  };
  return words;
}

// Numerically stable log(1 + exp(z)).
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sign_label(Label y) { return y == Label::kMisleading ? 1.0 : -1.0; }

// d loss_i / d z. Written so that flipping the label and negating z
// negates the residual bit-for-bit.
double residual(double z, Label y) { return y == Label::kMisleading ? -sigmoid(-z) : sigmoid(z); }

void check_classes(std::span<const Example> data) {
  bool pos = false;
  bool neg = false;
  for (const auto& e : data) {
    if (e.y == Label::kMisleading) pos = true;
    else if (e.y == Label::kNonMisleading) neg = true;
    else throw Error(ErrorCode::kContract, "training example without a label");
  }
  if (!pos || !neg) throw Error(ErrorCode::kContract, "degenerate training set", "both classes are required");
}

}  // namespace

bool is_stopword(std::string_view token) { return stopwords().count(token) > 0; }

double SparseVector::norm() const {
  double sum = 0.0;
  for (const auto& [i, w] : entries) sum += w * w;
  return std::sqrt(sum);
}

SparseVector make_dense(std::span<const double> values) {
  SparseVector v;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) v.entries.emplace_back(static_cast<std::uint32_t>(i), values[i]);
  }
  return v;
}

Vectorizer::Vectorizer(std::vector<std::string> terms, std::vector<double> idf)
    : terms_(std::move(terms)), idf_(std::move(idf)) {
  if (terms_.size() != idf_.size()) throw Error(ErrorCode::kValidation, "vocabulary and idf lengths differ");
  for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
}

Vectorizer Vectorizer::fit(const std::vector<std::vector<std::string>>& documents) {
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    std::set<std::string_view> distinct;
    for (const auto& t : doc) {
      if (!is_stopword(t)) distinct.insert(t);
    }
    for (auto t : distinct) ++df[std::string(t)];
  }
  std::vector<std::string> terms;
  std::vector<double> idf;
  const double n = static_cast<double>(documents.size());
  for (const auto& [term, count] : df) {
    terms.push_back(term);
    idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return Vectorizer(std::move(terms), std::move(idf));
}

SparseVector Vectorizer::transform(const std::vector<std::string>& tokens) const {
  std::map<std::uint32_t, double> tf;
  for (const auto& t : tokens) {
    auto it = index_.find(t);
    if (it != index_.end()) tf[it->second] += 1.0;
  }
  SparseVector v;
  v.entries.reserve(tf.size());
  for (const auto& [i, count] : tf) v.entries.emplace_back(i, count * idf_[i]);
  const double norm = v.norm();
  if (norm > 0.0) {
    for (auto& [i, w] : v.entries) w /= norm;
  }
  return v;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double LinearModel::decision(const SparseVector& x) const {
  double z = bias;
  for (const auto& [i, w] : x.entries) {
    if (i < weights.size()) z += weights[i] * w;
  }
  return z;
}

double loss(const LinearModel& model, std::span<const Example> data, double l2) {
  double sum = 0.0;
  for (const auto& e : data) sum += softplus(-sign_label(e.y) * model.decision(e.x));
  double reg = 0.0;
  for (double w : model.weights) reg += w * w;
  return sum / static_cast<double>(data.size()) + 0.5 * l2 * reg;
}

void gradient(const LinearModel& model, std::span<const Example> data, double l2, std::vector<double>& grad_w,
              double& grad_b) {
  grad_w.assign(model.weights.size(), 0.0);
  grad_b = 0.0;
  for (const auto& e : data) {
    const double r = residual(model.decision(e.x), e.y);
    grad_b += r;
    for (const auto& [i, x] : e.x.entries) grad_w[i] += r * x;
  }
  const double inv_n = 1.0 / static_cast<double>(data.size());
  grad_b *= inv_n;
  for (std::size_t j = 0; j < grad_w.size(); ++j) grad_w[j] = grad_w[j] * inv_n + l2 * model.weights[j];
}

LinearModel train_supervised(std::span<const Example> data, std::size_t dimension, const TrainConfig& config) {
  check_classes(data);
  for (const auto& e : data) {
    for (const auto& [i, x] : e.x.entries) {
      if (i >= dimension) throw Error(ErrorCode::kContract, "feature index outside the vocabulary");
      if (!std::isfinite(x)) throw Error(ErrorCode::kContract, "non-finite feature weight");
    }
  }

  // Curvature of the mean logistic loss is bounded by max|x|^2 / 4 (+1 for
  // the bias column) plus the ridge term.
  double max_sq = 0.0;
  for (const auto& e : data) max_sq = std::max(max_sq, e.x.norm() * e.x.norm());
  const double curvature = 0.25 * (max_sq + 1.0) + config.l2;
  const double step0 = config.learning_rate / curvature;

  LinearModel model;
  model.weights.assign(dimension, 0.0);
  std::vector<double> gw;
  double gb = 0.0;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    gradient(model, data, config.l2, gw, gb);
    double gnorm = gb * gb;
    for (double g : gw) gnorm += g * g;
    if (std::sqrt(gnorm) < config.tolerance) break;
    const double step = step0 / (1.0 + config.decay * epoch);
    for (std::size_t j = 0; j < dimension; ++j) model.weights[j] -= step * gw[j];
    model.bias -= step * gb;
    model.epochs = epoch + 1;
  }
  return model;
}

Prediction predict(const LinearModel& model, const SparseVector& x) {
  Prediction p;
  p.decision = model.decision(x);
  p.label = p.decision > 0.0 ? Label::kMisleading : Label::kNonMisleading;
  p.confidence = sigmoid(std::abs(p.decision));
  return p;
}

void SelfTrainConfig::validate() const {
  if (!(tau > 0.5 && tau <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "confidence threshold must be in (0.5, 1]");
  if (max_rounds < 1) throw Error(ErrorCode::kInvalidArgument, "max_rounds must be positive");
  if (batch_cap == 0 && !(batch_cap_fraction > 0.0 && batch_cap_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "batch cap fraction must be in (0, 1]");
  }
}

SelfTrainResult self_train(std::span<const Example> seed, std::span<const UnlabeledExample> unlabeled,
                           std::size_t dimension, const SelfTrainConfig& config) {
  config.validate();
  check_classes(seed);

  std::vector<Example> pool(seed.begin(), seed.end());
  std::vector<std::size_t> remaining(unlabeled.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

  const std::size_t cap =
      config.batch_cap != 0
          ? config.batch_cap
          : std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::ceil(config.batch_cap_fraction * static_cast<double>(unlabeled.size()))));

  SelfTrainResult result;
  bool admitted_last = false;
  for (int round = 1; round <= config.max_rounds; ++round) {
    result.pool_sizes.push_back(pool.size());
    result.model = train_supervised(pool, dimension, config.train);
    result.rounds = round;
    admitted_last = false;

    struct Candidate {
      std::size_t index;
      Prediction prediction;
    };
    std::vector<Candidate> candidates;
    for (std::size_t idx : remaining) {
      const auto p = predict(result.model, unlabeled[idx].x);
      if (p.confidence >= config.tau) candidates.push_back({idx, p});
    }
    if (candidates.empty()) break;
    std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
      if (a.prediction.confidence != b.prediction.confidence) return a.prediction.confidence > b.prediction.confidence;
      return unlabeled[a.index].id < unlabeled[b.index].id;
    });
    if (candidates.size() > cap) candidates.resize(cap);

    std::unordered_set<std::size_t> taken;
    for (const auto& c : candidates) {
      pool.push_back({unlabeled[c.index].x, c.prediction.label});
      result.pseudo_labels.push_back({unlabeled[c.index].id, c.prediction.label, c.prediction.confidence, round});
      taken.insert(c.index);
    }
    std::erase_if(remaining, [&](std::size_t i) { return taken.count(i) > 0; });
    admitted_last = true;
    if (remaining.empty()) break;
  }
  // The last admissions have not been trained on yet.
  if (admitted_last) result.model = train_supervised(pool, dimension, config.train);
  return result;
}

Prediction ClassifierModel::predict(const std::vector<std::string>& tokens) const {
  return classifier::predict(linear, vectorizer.transform(tokens));
}

nlohmann::ordered_json to_json(const ClassifierModel& model) {
  nlohmann::ordered_json j;
  j["format"] = "concierge-classifier";
  j["format_version"] = 1;
  j["version"] = model.version;
  j["trained_at"] = timeutil::format_rfc3339(model.trained_at);
  j["config"] = {{"tau", model.config.tau},
                 {"max_rounds", model.config.max_rounds},
                 {"batch_cap_fraction", model.config.batch_cap_fraction},
                 {"batch_cap", model.config.batch_cap},
                 {"l2", model.config.train.l2},
                 {"learning_rate", model.config.train.learning_rate},
                 {"decay", model.config.train.decay},
                 {"max_epochs", model.config.train.max_epochs},
                 {"tolerance", model.config.train.tolerance}};
  j["seed_size"] = model.seed_size;
  j["pseudo_labeled"] = model.pseudo_labeled;
  j["epochs"] = model.linear.epochs;
  j["vocabulary"] = model.vectorizer.terms();
  j["idf"] = model.vectorizer.idf();
  j["weights"] = model.linear.weights;
  j["bias"] = model.linear.bias;
  return j;
}

ClassifierModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "concierge-classifier") throw Error(ErrorCode::kValidation, "not a classifier model");
    ClassifierModel m;
    m.version = j.at("version").get<std::int64_t>();
    m.trained_at = timeutil::parse(j.at("trained_at").get<std::string>()).value_or(0);
    const auto& c = j.at("config");
    m.config.tau = c.at("tau").get<double>();
    m.config.max_rounds = c.at("max_rounds").get<int>();
    m.config.batch_cap_fraction = c.at("batch_cap_fraction").get<double>();
    m.config.batch_cap = c.at("batch_cap").get<std::size_t>();
    m.config.train.l2 = c.at("l2").get<double>();
    m.config.train.learning_rate = c.at("learning_rate").get<double>();
    m.config.train.decay = c.at("decay").get<double>();
    m.config.train.max_epochs = c.at("max_epochs").get<int>();
    m.config.train.tolerance = c.at("tolerance").get<double>();
    m.seed_size = j.value("seed_size", std::size_t{0});
    m.pseudo_labeled = j.value("pseudo_labeled", std::size_t{0});
    m.vectorizer = Vectorizer(j.at("vocabulary").get<std::vector<std::string>>(), j.at("idf").get<std::vector<double>>());
    m.linear.weights = j.at("weights").get<std::vector<double>>();
    m.linear.bias = j.at("bias").get<double>();
    m.linear.epochs = j.value("epochs", 0);
    if (m.linear.weights.size() != m.vectorizer.size()) {
      throw Error(ErrorCode::kValidation, "weights do not match vocabulary size");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kValidation, "malformed classifier model", e.what());
  }
}

}  // namespace concierge::classifier
