#pragma once

#include "concierge/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace concierge::classifier {

// Sorted (index, weight) pairs.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  double norm() const;
  bool empty() const { return entries.empty(); }
  bool operator==(const SparseVector&) const = default;
};

SparseVector make_dense(std::span<const double> values);

// TF-IDF with smoothed idf = ln((1 + N) / (1 + df)) + 1 and L2
// normalization. Vocabulary is sorted, stopwords excluded.
class Vectorizer {
 public:
  Vectorizer() = default;
  Vectorizer(std::vector<std::string> terms, std::vector<double> idf);

  static Vectorizer fit(const std::vector<std::vector<std::string>>& documents);

  SparseVector transform(const std::vector<std::string>& tokens) const;

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<double>& idf() const { return idf_; }

 private:
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

bool is_stopword(std::string_view token);

struct TrainConfig {
  double l2 = 1e-2;
  // Multiplier on 1/L, where L bounds the loss curvature from the data.
  double learning_rate = 1.0;
  double decay = 0.01;  // step_t = step_0 / (1 + decay * t)
  int max_epochs = 200;
  double tolerance = 1e-6;
};

struct Example {
  SparseVector x;
  Label y = Label::kUnlabeled;  // kMisleading is the positive class
};

// Logistic regression; bias is not regularized.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  int epochs = 0;

  double decision(const SparseVector& x) const;
};

double sigmoid(double z);

// Mean logistic loss plus (l2 / 2) * |w|^2.
double loss(const LinearModel& model, std::span<const Example> data, double l2);
void gradient(const LinearModel& model, std::span<const Example> data, double l2, std::vector<double>& grad_w,
              double& grad_b);

// Full-batch gradient descent from zero. Throws Error(kContract,
// "degenerate training set") unless both classes are present.
LinearModel train_supervised(std::span<const Example> data, std::size_t dimension, const TrainConfig& config = {});

struct Prediction {
  Label label = Label::kNonMisleading;
  double confidence = 0.5;  // sigmoid(|decision|), in [0.5, 1]
  double decision = 0.0;
};

// decision > 0 predicts Misleading; a tie at zero predicts NonMisleading.
Prediction predict(const LinearModel& model, const SparseVector& x);

struct SelfTrainConfig {
  double tau = 0.9;
  int max_rounds = 10;
  double batch_cap_fraction = 0.1;  // of the initial unlabeled pool
  std::size_t batch_cap = 0;        // overrides the fraction when non-zero
  TrainConfig train;

  void validate() const;
};

struct UnlabeledExample {
  std::string id;
  SparseVector x;
};

struct PseudoLabel {
  std::string id;
  Label label = Label::kUnlabeled;
  double confidence = 0.0;
  int round = 0;
};

struct SelfTrainResult {
  LinearModel model;
  std::vector<PseudoLabel> pseudo_labels;
  int rounds = 0;
  std::vector<std::size_t> pool_sizes;  // labeled pool size at the start of each round
};

SelfTrainResult self_train(std::span<const Example> seed, std::span<const UnlabeledExample> unlabeled,
                           std::size_t dimension, const SelfTrainConfig& config = {});

struct ClassifierModel {
  Vectorizer vectorizer;
  LinearModel linear;
  SelfTrainConfig config;
  std::int64_t version = 0;
  Timestamp trained_at = 0;
  std::size_t seed_size = 0;
  std::size_t pseudo_labeled = 0;

  Prediction predict(const std::vector<std::string>& tokens) const;
};

nlohmann::ordered_json to_json(const ClassifierModel& model);
ClassifierModel model_from_json(const nlohmann::json& j);

}  // namespace concierge::classifier
