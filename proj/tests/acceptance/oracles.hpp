#pragma once

// Independent reference implementations for the acceptance checks. Nothing
// here calls into the library's algorithms: each oracle is the plainest
// possible restatement of a definition (full sorts, exhaustive filters).

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

double cosine(const std::vector<double>& a, const std::vector<double>& b);
long double cosine_ld(const std::vector<double>& a, const std::vector<double>& b);

struct Scored {
  std::string id;
  double similarity;
};

struct Candidate {
  std::string id;
  std::vector<double> vec;
  double coverage = 1.0;
};

// Sort everything, cut at k.
std::vector<Scored> top_k(const std::vector<double>& query, const std::vector<Candidate>& candidates, std::size_t k);

struct RecPost {
  std::string id;
  std::string label;
  std::string topic;
  std::string sentiment;
  std::set<std::pair<std::string, std::string>> entities;  // (lowercase, no '#', no spaces) x type
  std::vector<double> vec;
  double coverage = 1.0;
};

std::string entity_key(const std::string& surface);

struct RecResult {
  std::string id;
  int tier;  // 0 strict, 1 entity dropped, 2 sentiment dropped
  double similarity;
};

// Every candidate gets the strictest tier it qualifies for; sort by tier,
// then similarity, then id.
std::vector<RecResult> recommend(const std::vector<RecPost>& posts, const std::string& source,
                                 const std::string& target, std::size_t k, int loosest_tier);

// Mean logistic loss + l2/2 |w|^2 over dense rows, y in {0,1}.
double logistic_loss(const std::vector<double>& w, double b, const std::vector<std::vector<double>>& x,
                     const std::vector<int>& y, double l2);

// Best one-to-one topic->plant mapping (all permutations), fraction of docs
// whose dominant topic maps to their plant.
double purity(const std::vector<std::size_t>& dominant, const std::vector<std::size_t>& plant, std::size_t k);

std::vector<std::vector<std::string>> planted_corpus(std::size_t docs, std::size_t words_per_doc, std::uint64_t seed,
                                                     std::vector<std::size_t>& plant_of_doc);

struct GaussianData {
  std::vector<std::vector<double>> x;
  std::vector<int> cluster;  // 1 or 0
};

GaussianData two_gaussians(std::size_t n, double separation, std::uint64_t seed);

}  // namespace oracle
