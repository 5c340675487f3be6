#include <doctest.h>

#include "concierge/embedding_index.hpp"
#include "concierge/errors.hpp"
#include "helpers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

using namespace concierge;
using namespace concierge::embeddings;
using testing::tok;

namespace {

EmbeddingTable load(const std::string& text, std::size_t dim = 0) {
  std::istringstream in(text);
  return load_embeddings(in, dim);
}

PostVector vec(std::string id, std::vector<double> v, double coverage = 1.0) { return {std::move(id), std::move(v), coverage}; }

std::vector<Neighbor> brute_force(const PostVector& q, const std::vector<PostVector>& all, std::size_t k) {
  std::vector<Neighbor> out;
  for (const auto& p : all) {
    if (p.coverage == 0.0) continue;
    out.push_back({p.id, cosine(q.values, p.values)});
  }
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.similarity != b.similarity ? a.similarity > b.similarity : a.id < b.id;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

}  // namespace

TEST_CASE("loading") {
  auto t = load("a 1 2 3\nb 4 5 6\n");
  CHECK(t.size() == 2);
  CHECK(t.dim() == 3);
  CHECK(t.find("b")[2] == 6.0f);
  CHECK(t.find("c") == nullptr);

  std::string ten;
  for (int i = 0; i < 10; ++i) ten += "w" + std::to_string(i) + (i == 4 ? " 1 2\n" : " 1 2 3\n");
  auto nine = load(ten);
  CHECK(nine.size() == 9);
  CHECK(nine.skipped() == 1);

  auto dup = load("a 1 1 1\na 2 2 2\n");
  CHECK(dup.size() == 1);
  CHECK(dup.find("a")[0] == 1.0f);

  CHECK_THROWS_AS(load(""), Error);
  CHECK_THROWS_AS(load("a x y z\n"), Error);
  CHECK_THROWS_AS(load("a 1 2 3\n", 50), Error);
  CHECK(load_embeddings(testing::data_dir() / "embeddings" / "fixture.50d.txt", 50).size() == 300);
}

TEST_CASE("mean pooling") {
  auto t = load("pfizer 1 0 2\nsafe 3 2 0\n");
  auto one = embed_post("p", tok("pfizer"), t);
  CHECK(one.values == std::vector<double>{1, 0, 2});
  CHECK(one.coverage == 1.0);
  auto two = embed_post("p", tok("#Pfizer is safe"), t);
  CHECK(two.values == std::vector<double>{2, 1, 1});
  CHECK(two.coverage == doctest::Approx(2.0 / 3.0));
  auto oov = embed_post("p", tok("nothing here"), t);
  CHECK(oov.values == std::vector<double>{0, 0, 0});
  CHECK(oov.coverage == 0.0);
  CHECK(embed_post("p", tok(""), t).coverage == 0.0);
}

TEST_CASE("cosine examples") {
  CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{1, 0}) == 1.0);
  CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}) ==
        doctest::Approx(32.0 / (std::sqrt(14.0) * std::sqrt(77.0))).epsilon(1e-15));
  CHECK(cosine(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6}) == doctest::Approx(0.97463).epsilon(1e-5));
  CHECK(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 1}) == 0.0);
  CHECK_THROWS(cosine(std::vector<double>{1}, std::vector<double>{1, 2}));
}

TEST_CASE("cosine properties") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int i = 0; i < 500; ++i) {
    std::vector<double> a(20), b(20);
    for (auto& x : a) x = g(rng);
    for (auto& x : b) x = g(rng);
    const double c = scale(rng);
    std::vector<double> ca(a);
    for (auto& x : ca) x *= c;
    CHECK(std::abs(cosine(a, ca) - 1.0) < 1e-9);
    CHECK(cosine(a, b) == cosine(b, a));
    CHECK(std::abs(cosine(a, b)) <= 1.0);
  }
}

TEST_CASE("top_k examples") {
  auto q = vec("q", {1, 0});
  CHECK(top_k(q, {&q}, 3) == std::vector<Neighbor>{{"q", 1.0}});
  auto a = vec("a", {1, 1}), b = vec("b", {0, 1}), z = vec("z", {0, 0}, 0.0);
  auto all = top_k(q, {&b, &z, &a}, 10);
  REQUIRE(all.size() == 2);
  CHECK(all[0].id == "a");
  CHECK(all[1].id == "b");
  CHECK_THROWS_AS(top_k(q, {&a}, 0), Error);

  // exact ties order by id
  auto t2 = vec("t2", {2, 0}), t1 = vec("t1", {3, 0});
  auto tied = top_k(q, {&t2, &t1}, 2);
  CHECK(tied[0].id == "t1");
  CHECK(tied[1].id == "t2");
}

TEST_CASE("top_k equals brute force, including duplicate vectors") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<PostVector> all;
  for (int i = 0; i < 300; ++i) {
    std::vector<double> v(16);
    for (auto& x : v) x = g(rng);
    char id[8];
    std::snprintf(id, sizeof id, "p%03d", (i * 37) % 300);
    all.push_back(vec(id, v, i % 50 == 0 ? 0.0 : 1.0));
  }
  for (int i = 0; i < 40; ++i) all.push_back(vec("d" + std::to_string(i), all[static_cast<std::size_t>(i)].values));
  std::vector<const PostVector*> ptrs;
  VectorIndex index;
  std::vector<std::string> ids;
  for (const auto& p : all) {
    ptrs.push_back(&p);
    index.insert(p);
    ids.push_back(p.id);
  }
  for (int qi = 0; qi < 20; ++qi) {
    const auto& q = all[static_cast<std::size_t>(qi * 7)];
    for (std::size_t k : {1u, 3u, 10u, 50u, 1000u}) {
      auto expected = brute_force(q, all, k);
      CHECK(top_k(q, ptrs, k) == expected);
      CHECK(index.top_k(q, ids, k) == expected);
    }
  }
  ids.push_back("missing");
  CHECK(index.top_k(all[0], ids, 5).size() == 5);
}
