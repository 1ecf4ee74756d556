#include <random>

#include "doctest.h"
#include "obsr/text/bm25.hpp"
#include "obsr/text/fuzzy.hpp"
#include "obsr/text/porter.hpp"
#include "obsr/text/tokenize.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace obsr;
using namespace obsr::text;

TEST_CASE("word tokens") {
  CHECK(word_tokens("Hello, wörld_1 foo-bar  42") == std::vector<std::string>{"Hello", "wörld_1", "foo", "bar", "42"});
  CHECK(lower_word_tokens("Short DESCRIPTION") == std::vector<std::string>{"short", "description"});
  CHECK(word_tokens("  ...  ").empty());
}

TEST_CASE("utf-8 helpers") {
  CHECK(decode_utf8("aé€") == U"aé€");
  CHECK(decode_utf8("a\xff" "b") == U"a�b");
  CHECK(encode_utf8(U"aé€") == "aé€");
  CHECK(truncate_chars("héllo", 2) == "hé");
  CHECK(truncate_chars("abc", 10) == "abc");
}

TEST_CASE("porter stems") {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"caresses", "caress"}, {"ponies", "poni"},      {"ties", "tie"},        {"cats", "cat"},
      {"feed", "feed"},       {"agreed", "agre"},      {"plastered", "plaster"}, {"motoring", "motor"},
      {"sing", "sing"},       {"hopping", "hop"},      {"filing", "file"},     {"happy", "happi"},
      {"relational", "relat"}, {"electrical", "electr"}, {"adjustment", "adjust"}, {"searching", "search"},
      {"boxes", "box"},       {"submitted", "submit"}, {"dying", "die"},       {"skies", "sky"},
      {"news", "news"},       {"is", "is"},            {"Searched", "search"}, {"filters", "filter"}};
  for (const auto& [word, stem] : cases) {
    INFO(word);
    CHECK(porter_stem(word) == stem);
  }
}

TEST_CASE("bm25 matches the reference formula") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<std::string>> docs;
    const std::size_t n = 1 + testing::pick(rng, 12);
    for (std::size_t i = 0; i < n; ++i) docs.push_back(lower_word_tokens(testing::random_words(rng, 8)));
    if (trial % 5 == 0) docs.push_back({});
    const auto query = lower_word_tokens(testing::random_words(rng, 4));
    const Bm25Index index(docs);
    const auto got = index.scores(query);
    const auto want = testing::bm25_reference(docs, query);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }
  SUBCASE("empty corpus") {
    const Bm25Index index({});
    CHECK(index.scores(std::vector<std::string>{"a"}).empty());
  }
}

TEST_CASE("top-k keeps index order on ties") {
  const std::vector<double> s = {1.0, 3.0, 2.0, 3.0, 0.5};
  CHECK(top_k_indices(s, 3) == std::vector<std::size_t>{1, 3, 2});
  CHECK(top_k_indices(s, 10) == std::vector<std::size_t>{1, 3, 2, 0, 4});
  CHECK(top_k_indices(s, 0).empty());
}

TEST_CASE("fuzzy ratios match the edit distance definition") {
  CHECK(similarity_ratio("", "") == 1.0);
  CHECK(similarity_ratio("kitten", "sitting") == doctest::Approx(1.0 - 3.0 / 7.0));
  CHECK(partial_ratio("", "abc") == 0.0);
  CHECK(partial_ratio("search", "searchbox") == 1.0);
  CHECK(edit_distance(U"é", U"e") == 1);
  std::mt19937_64 rng(11);
  const std::string alphabet = "abcde ";
  for (int trial = 0; trial < 300; ++trial) {
    std::string a, b;
    for (std::size_t i = testing::pick(rng, 9); i > 0; --i) a += alphabet[testing::pick(rng, alphabet.size())];
    for (std::size_t i = testing::pick(rng, 12); i > 0; --i) b += alphabet[testing::pick(rng, alphabet.size())];
    INFO(a << " | " << b);
    CHECK(similarity_ratio(a, b) == doctest::Approx(testing::ref_ratio(a, b)));
    CHECK(partial_ratio(a, b) == doctest::Approx(testing::ref_partial_ratio(a, b)));
    CHECK(similarity_ratio(a, b) == doctest::Approx(similarity_ratio(b, a)));
  }
}
