#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "gradrel/hashing.hpp"

using namespace gradrel;

TEST_CASE("featurize is deterministic and index-sorted with unique indices") {
    FeatureHasher h;
    auto a = h.featurize("tuntuva sateinen aamu");
    auto b = h.featurize("tuntuva sateinen aamu");
    REQUIRE(a.indices.size() == b.indices.size());
    for (std::size_t i = 0; i < a.indices.size(); ++i) {
        CHECK(a.indices[i] == b.indices[i]);
        CHECK(a.values[i] == b.values[i]);
        if (i > 0) CHECK(a.indices[i] > a.indices[i - 1]);
        CHECK(a.indices[i] < h.num_buckets);
        CHECK(a.values[i] != 0.0);
    }
    CHECK(a.nnz() > 0);
}

TEST_CASE("different seeds give different vectors") {
    FeatureHasher h1;
    FeatureHasher h2;
    h2.hash_seed = 99;
    auto a = h1.featurize("shared fact alpha");
    auto b = h2.featurize("shared fact alpha");
    bool differ = a.indices != b.indices || a.values != b.values;
    CHECK(differ);
}

TEST_CASE("n-gram count accounting without sign cancellation") {
    FeatureHasher h;
    h.use_sign = false;
    h.n_gram_sizes = {3};
    const std::string text = "abcdef";  // 4 trigrams
    auto v = h.featurize(text);
    double total = 0.0;
    for (double x : v.values) total += x;
    CHECK(total == doctest::Approx(4.0));
}

TEST_CASE("strings shorter than every n-gram size produce an empty vector") {
    FeatureHasher h;
    h.n_gram_sizes = {3, 4};
    auto v = h.featurize("ab");
    CHECK(v.nnz() == 0);
}

TEST_CASE("repeated n-grams accumulate in one bucket") {
    FeatureHasher h;
    h.use_sign = false;
    h.n_gram_sizes = {2};
    auto v = h.featurize("aaaa");  // "aa" three times
    REQUIRE(v.nnz() == 1);
    CHECK(v.values[0] == doctest::Approx(3.0));
}

TEST_CASE("dot product matches a dense oracle") {
    FeatureHasher h;
    auto a = h.featurize("kissa istuu ikkunalla");
    auto b = h.featurize("kissa nukkuu ikkunalla");
    std::map<std::uint32_t, double> dense;
    for (std::size_t i = 0; i < a.indices.size(); ++i) dense[a.indices[i]] = a.values[i];
    double expected = 0.0;
    for (std::size_t i = 0; i < b.indices.size(); ++i) {
        auto it = dense.find(b.indices[i]);
        if (it != dense.end()) expected += it->second * b.values[i];
    }
    CHECK(dot(a, b) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(dot(a, a) == doctest::Approx(a.squared_norm()).epsilon(1e-12));
    CHECK(dot(a, b) == doctest::Approx(dot(b, a)).epsilon(1e-12));
}

TEST_CASE("squared norm is a sum of squares") {
    FeatureHasher h;
    auto v = h.featurize("plain text sample");
    double expected = 0.0;
    for (double x : v.values) expected += x * x;
    CHECK(v.squared_norm() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("validate rejects non-power-of-two buckets and empty n-gram list") {
    FeatureHasher h;
    h.num_buckets = 1000;
    CHECK_THROWS(h.validate());
    h.num_buckets = 1024;
    CHECK_NOTHROW(h.validate());
    h.n_gram_sizes = {};
    CHECK_THROWS(h.validate());
    h.n_gram_sizes = {0};
    CHECK_THROWS(h.validate());
}

TEST_CASE("similar strings share more mass than unrelated strings") {
    FeatureHasher h;
    auto base = h.featurize("graded relevance threshold study");
    auto near = h.featurize("graded relevance threshold survey");
    auto far = h.featurize("zx qv jjj kpw");
    auto cos = [](const SparseVec& x, const SparseVec& y) {
        return dot(x, y) / std::sqrt(x.squared_norm() * y.squared_norm());
    };
    CHECK(cos(base, near) > cos(base, far));
}
