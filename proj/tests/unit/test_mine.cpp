#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "obsr/dom/document.hpp"
#include "obsr/error.hpp"
#include "obsr/mine/candidates.hpp"
#include "obsr/mine/dataset.hpp"
#include "obsr/mine/ddmin.hpp"
#include "obsr/mine/oracles.hpp"
#include "obsr/mine/partition.hpp"
#include "obsr/mine/simulate.hpp"
#include "obsr/reduce/providers.hpp"
#include "support/gen.hpp"
#include "support/mining.hpp"
#include "support/tempdir.hpp"

using namespace obsr;
using namespace obsr::mine;
using dom::ElementRef;
using dom::RefList;

namespace {

RefList tags(std::initializer_list<const char*> bids) {
  RefList out;
  for (const char* b : bids) out.push_back(ElementRef::tag(b));
  return out;
}

Verdict verdict(bool fail) { return fail ? Verdict::Fail : Verdict::Pass; }

const std::string kTwoClusters =
    R"(<html><body bid="b"><section bid="s1"><div bid="d1"><span bid="x1">a</span><span bid="x2">b</span>)"
    R"(<span bid="x3">c</span></div></section><section bid="s2"><div bid="d2"><span bid="y1">d</span>)"
    R"(<span bid="y2">e</span><span bid="y3">f</span></div></section></body></html>)";

}  // namespace

TEST_CASE("simulation oracle") {
  SimulationOracle o(tags({"b", "c"}));
  CHECK(o.test(tags({"b", "c"})) == Verdict::Fail);
  CHECK(o.test({}) == Verdict::Pass);
  CHECK(o.test(tags({"a", "b", "c", "d"})) == Verdict::Fail);
  CHECK(o.test(tags({"a", "b"})) == Verdict::Pass);
  CHECK(o.call_count() == 4);
  CHECK_THROWS_AS(SimulationOracle(RefList{}), PreconditionViolated);
}

TEST_CASE("ddmin on the four-element example") {
  const RefList c = tags({"a", "b", "c", "d"});
  auto fails = [](const RefList& s) { return testing::includes_all(s, tags({"b"})); };

  // Every subset that fails and loses the failure when any one element is dropped.
  std::vector<RefList> one_minimal;
  for (unsigned mask = 1; mask < 16; ++mask) {
    RefList s;
    for (unsigned i = 0; i < 4; ++i) {
      if (mask & (1u << i)) s.push_back(c[i]);
    }
    if (!fails(s)) continue;
    bool minimal = true;
    for (std::size_t i = 0; i < s.size(); ++i) minimal = minimal && !fails(testing::without(s, i));
    if (minimal) one_minimal.push_back(s);
  }
  REQUIRE(one_minimal.size() == 1);
  CHECK(one_minimal[0] == tags({"b"}));

  FunctionOracle oracle([&](const RefList& s) { return verdict(fails(s)); });
  ContiguousPartitioner part;
  const auto r = ddmin(c, oracle, part);
  CHECK(r.mfs == one_minimal[0]);
  CHECK(r.oracle_calls == oracle.call_count());

  SUBCASE("singleton candidate set needs only the precondition call") {
    FunctionOracle o([](const RefList&) { return Verdict::Fail; });
    const auto s = ddmin(tags({"x"}), o, part);
    CHECK(s.mfs == tags({"x"}));
    CHECK(s.oracle_calls == 1);
    CHECK(s.iterations == 0);
  }
  SUBCASE("failure only on the full set keeps everything") {
    FunctionOracle o([&](const RefList& s) { return verdict(s.size() == 4); });
    CHECK(ddmin(c, o, part).mfs == c);
  }
  SUBCASE("precondition") {
    FunctionOracle o([](const RefList&) { return Verdict::Pass; });
    CHECK_THROWS_AS(ddmin(c, o, part), PreconditionViolated);
    CHECK_THROWS_AS(ddmin(RefList{}, o, part), PreconditionViolated);
  }
}

TEST_CASE("ddmin is sound, 1-minimal and within the call bound") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + testing::pick(rng, 12);
    const auto universe = testing::ref_universe(n, rng);
    const auto family = testing::random_family(universe, rng);
    FunctionOracle oracle([&](const RefList& s) { return verdict(family.fails(s)); });
    RandomPartitioner random(static_cast<std::uint64_t>(trial));
    ContiguousPartitioner contiguous;
    Partitioner& part = trial % 2 ? static_cast<Partitioner&>(random) : contiguous;
    const auto r = ddmin(universe, oracle, part);
    INFO("trial " << trial);
    CHECK(family.fails(r.mfs));
    CHECK(testing::includes_all(universe, r.mfs));
    for (std::size_t i = 0; i < r.mfs.size(); ++i) CHECK_FALSE(family.fails(testing::without(r.mfs, i)));
    CHECK(r.oracle_calls <= n * n + 3 * n);
  }
}

TEST_CASE("ddmin recovers a planted failure set exactly") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + testing::pick(rng, 12);
    auto universe = testing::ref_universe(n, rng);
    auto planted = universe;
    std::shuffle(planted.begin(), planted.end(), rng);
    planted.resize(1 + testing::pick(rng, std::min<std::size_t>(4, n)));
    dom::canonicalize(planted);
    SimulationOracle oracle(planted);
    RandomPartitioner part(static_cast<std::uint64_t>(trial) * 7 + 1);
    CHECK(ddmin(universe, oracle, part).mfs == planted);
  }
}

TEST_CASE("farthest-point partitioning") {
  const auto doc = dom::parse_html(kTwoClusters);
  const RefList leaves = tags({"x1", "x2", "x3", "y1", "y2", "y3"});

  SUBCASE("trivial chunk counts") {
    CHECK(fps_partition(doc, leaves, 1) == Chunks{leaves});
    const auto singles = fps_partition(doc, leaves, 6);
    REQUIRE(singles.size() == 6);
    for (const auto& c : singles) CHECK(c.size() == 1);
    CHECK(fps_partition(doc, leaves, 10).size() == 6);
  }
  SUBCASE("two clusters split along the tree") {
    for (const auto& a : leaves) {
      for (const auto& b : leaves) {
        const bool same = a.bid[0] == b.bid[0];
        if (same) {
          CHECK(dom::dom_distance(doc, a, b) <= 3);
        } else {
          CHECK(dom::dom_distance(doc, a, b) >= 7);
        }
      }
    }
    const auto chunks = fps_partition(doc, leaves, 2);
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0] == tags({"x1", "x2", "x3"}));
    CHECK(chunks[1] == tags({"y1", "y2", "y3"}));
  }
  SUBCASE("exact partition on random inputs") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      const auto d = testing::random_document(rng);
      RefList refs;
      for (const auto& b : d.bids()) {
        if (testing::pick(rng, 2)) refs.push_back(ElementRef::tag(b));
        if (testing::pick(rng, 4) == 0 && !d.at(b).direct_text().empty()) refs.push_back(ElementRef::text(b));
      }
      if (refs.empty()) continue;
      dom::canonicalize(refs);
      const std::size_t n = 1 + testing::pick(rng, refs.size() + 2);
      const auto chunks = fps_partition(d, refs, n);
      CHECK(chunks.size() == std::min(n, refs.size()));
      const std::size_t cap = (refs.size() + n - 1) / n;
      RefList all;
      for (const auto& c : chunks) {
        CHECK(!c.empty());
        CHECK(c.size() <= cap);
        CHECK(std::is_sorted(c.begin(), c.end()));
        all.insert(all.end(), c.begin(), c.end());
      }
      CHECK(all.size() == refs.size());
      dom::canonicalize(all);
      CHECK(all == refs);
      CHECK(std::find(chunks[0].begin(), chunks[0].end(), refs.front()) != chunks[0].end());
    }
  }
}

TEST_CASE("other partitioners") {
  const RefList refs = tags({"a", "b", "c", "d", "e"});
  CHECK(contiguous_partition(refs, 2) == Chunks{tags({"a", "b", "c"}), tags({"d", "e"})});
  CHECK(contiguous_partition(refs, 3) == Chunks{tags({"a", "b"}), tags({"c", "d"}), tags({"e"})});
  RandomPartitioner r1(5), r2(5);
  const auto p1 = r1.partition(refs, 2);
  CHECK(p1 == r2.partition(refs, 2));
  RefList all;
  for (const auto& c : p1) all.insert(all.end(), c.begin(), c.end());
  dom::canonicalize(all);
  CHECK(all == refs);
  const auto doc = dom::parse_html(kTwoClusters);
  CHECK(make_partitioner("fps", doc, 0)->name() == "fps");
  CHECK(make_partitioner("random", doc, 0)->name() == "random");
  CHECK(make_partitioner("contiguous", doc, 0)->name() == "contiguous");
  CHECK_THROWS_AS(make_partitioner("kmeans", doc, 0), ConfigError);

  std::mt19937_64 rng(1);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 60000; ++i) ++counts[uniform_below(rng, 6)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("proxy oracle") {
  const auto doc = dom::parse_html(R"(<html><body><input bid="1" value="secret"><button bid="2">Go</button></body></html>)");
  const std::string wrong = "click('2')";
  SUBCASE("same action means failure") {
    const reduce::CannedCompletion agent(std::vector<reduce::CannedCompletion::Entry>{{"", "<action>click('2')</action>"}});
    ProxyOracle o(doc, "g", {}, agent, wrong);
    CHECK(o.test({}) == Verdict::Fail);
    CHECK(o.test(tags({"1", "2"})) == Verdict::Fail);
  }
  SUBCASE("different action passes") {
    const reduce::CannedCompletion agent(std::vector<reduce::CannedCompletion::Entry>{{"", "click('1')"}});
    ProxyOracle o(doc, "g", {}, agent, wrong);
    CHECK(o.test({}) == Verdict::Pass);
  }
  SUBCASE("whitespace is normalized") {
    const reduce::CannedCompletion agent(std::vector<reduce::CannedCompletion::Entry>{{"", "  click('2')\n"}});
    ProxyOracle o(doc, "g", {}, agent, wrong);
    CHECK(o.test({}) == Verdict::Fail);
    CHECK(normalize_action(" fill('1',   'a b') ") == "fill('1', 'a b')");
  }
  SUBCASE("the agent sees the ablated page") {
    std::string seen;
    const reduce::FunctionCompletion agent([&](const reduce::CompletionRequest& r) {
      seen = r.user;
      return std::string("noop()");
    });
    ProxyOracle o(doc, "g", {}, agent, wrong);
    o.test(RefList{ElementRef::attr("1", "value")});
    CHECK(seen.find("secret") == std::string::npos);
    o.test({});
    CHECK(seen.find("secret") != std::string::npos);
  }
  SUBCASE("provider errors propagate") {
    const reduce::CannedCompletion agent(std::vector<reduce::CannedCompletion::Entry>{{"zzz", "x"}});
    ProxyOracle o(doc, "g", {}, agent, wrong);
    CHECK_THROWS_AS(o.test({}), ProviderUnavailable);
  }
}

TEST_CASE("candidate sets") {
  const auto doc = dom::parse_html(
      R"(<html><body bid="0"><div bid="g"><div bid="p"><span bid="s1">one</span><span bid="s2">two</span>)"
      R"(<a bid="t" href="#"><b bid="c1">x</b><i bid="c2">y</i></a><span bid="s3">three</span></div></div></body></html>)");
  SUBCASE("only present information is kept") {
    const auto set = make_candidate_set(
        "i", doc, RefList{ElementRef::attr("t", "href"), ElementRef::attr("t", "title"), ElementRef::tag("zz"),
                          ElementRef::text("s1"), ElementRef::text("t")});
    CHECK(set.refs == RefList{ElementRef::text("s1"), ElementRef::attr("t", "href")});
    CHECK(set.sources.at("t:href") == CandidateSource::SelfReport);
  }
  SUBCASE("structural neighbors in order and capped") {
    CHECK(structural_neighbors(doc, "t", 10) == std::vector<std::string>{"p", "c1", "c2", "s1", "s2", "s3", "g"});
    CHECK(structural_neighbors(doc, "t", 3) == std::vector<std::string>{"p", "c1", "c2"});
    CHECK_THROWS_AS(structural_neighbors(doc, "nope", 3), UnknownBid);
  }
  SUBCASE("expansion adds retrieval and adjacent refs without duplicates") {
    auto base = make_candidate_set("i", doc, RefList{ElementRef::tag("s1")});
    ExpansionOptions opt;
    opt.retrieval_k = 2;
    opt.use_dense = false;
    opt.action_target = "t";
    const auto out = expand_candidates(base, "three", {}, nullptr, opt);
    CHECK(out.sources.at("s1:@tag") == CandidateSource::SelfReport);
    CHECK(out.sources.at("s3:@tag") == CandidateSource::Bm25TopK);
    std::size_t adjacent = 0;
    for (const auto& [ref, src] : out.sources) adjacent += src == CandidateSource::DomAdjacent ? 1 : 0;
    CHECK(adjacent <= 10);
    CHECK(std::set<ElementRef>(out.refs.begin(), out.refs.end()).size() == out.refs.size());
    CHECK(out.sources.size() == out.refs.size());
  }
  SUBCASE("without retrieval only adjacent refs join") {
    auto base = make_candidate_set("i", doc, RefList{ElementRef::tag("s1")});
    ExpansionOptions opt;
    opt.retrieval_k = 0;
    opt.use_dense = false;
    opt.action_target = "t";
    const auto out = expand_candidates(base, "zzz", {}, nullptr, opt);
    CHECK(out.refs.size() == 1 + 6);
  }
  SUBCASE("dense expansion needs an embedder") {
    auto base = make_candidate_set("i", doc, {});
    CHECK_THROWS_AS(expand_candidates(base, "x", {}, nullptr, {}), ProviderUnavailable);
    const reduce::HashingEmbedder emb;
    const auto out = expand_candidates(base, "two", {}, &emb, {});
    CHECK(out.sources.at("s2:@tag") == CandidateSource::Bm25TopK);
  }
  CHECK(parse_candidate_source("dense-topk") == CandidateSource::DenseTopK);
  CHECK_THROWS_AS(parse_candidate_source("guess"), ConfigError);
}

TEST_CASE("dataset files") {
  testing::TempDir dir;
  MfsInstance inst{"w-1", "workarena", "model-a", "goal", {"click('1')"},
                   R"(<html><body><input bid="1" value="v"></body></html>)", {ElementRef::attr("1", "value")}, 3};
  const auto path = dir.file("data.jsonl");
  write_text_file_atomic(path, dataset_to_jsonl({inst, inst}));
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  const auto back = read_dataset(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].instance_id == "w-1");
  CHECK(back[0].mfs == inst.mfs);
  CHECK(back[0].step_index == 3);
  CHECK(back[0].action_history == inst.action_history);

  SUBCASE("html by relative path") {
    dir.write("page.html", R"(<p bid="9">t</p>)");
    const auto p = dir.write("rel.jsonl", R"({"instance_id":"r","html_path":"page.html","mfs":[{"bid":"9","attr":"@text"}]})"
                                          "\n\n");
    const auto d = read_dataset(p);
    REQUIRE(d.size() == 1);
    CHECK(d[0].html == R"(<p bid="9">t</p>)");
  }
  SUBCASE("validation errors name the line") {
    auto bad = [&](const std::string& second_line) {
      const auto p = dir.write("bad.jsonl", dataset_to_jsonl({inst}) + second_line + "\n");
      try {
        read_dataset(p);
      } catch (const ConfigError& e) {
        return std::string(e.what());
      }
      return std::string("no error");
    };
    CHECK(bad(R"({"instance_id":"x","html":"<p bid='1'>t</p>","mfs":[]})").find(":2:") != std::string::npos);
    CHECK(bad(R"({"instance_id":"x","html":"<p bid='1'>t</p>","html_path":"a","mfs":[{"bid":"1","attr":"@tag"}]})")
              .find(":2:") != std::string::npos);
    CHECK(bad(R"({"instance_id":"x","html":"<p bid='1'>t</p>","mfs":[{"bid":"2","attr":"@tag"}]})").find(":2:") !=
          std::string::npos);
    CHECK(bad("{not json").find(":2:") != std::string::npos);
    CHECK_THROWS_AS(read_dataset(dir.file("missing.jsonl")), ConfigError);
  }
  SUBCASE("candidate records") {
    const auto p = dir.write(
        "cand.jsonl",
        R"x({"instance_id":"c","html":"<p bid='1' class='k'>t</p>","refs":[{"bid":"1","attr":"class","source":"bm25-topk"},{"bid":"1","attr":"@text"}],"ground_truth":[{"bid":"1","attr":"class"}],"erroneous_action":"click('1')"})x"
        "\n");
    const auto recs = read_candidates(p);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].refs.size() == 2);
    CHECK(recs[0].sources == std::vector<CandidateSource>{CandidateSource::Bm25TopK, CandidateSource::SelfReport});
    CHECK(recs[0].ground_truth == std::optional<RefList>(RefList{ElementRef::attr("1", "class")}));
    CHECK(recs[0].erroneous_action == std::optional<std::string>("click('1')"));
    const auto again = candidate_from_json(to_json(recs[0]), dir.path().string());
    CHECK(again.refs == recs[0].refs);
    CHECK(again.sources == recs[0].sources);
  }
}

TEST_CASE("synthetic partitioning simulation") {
  std::mt19937_64 rng(3);
  const SyntheticSpec spec;
  const auto sim = make_synthetic_case(spec, rng);
  CHECK(sim.alternatives.size() == 2);
  for (const auto& a : sim.candidates) {
    for (const auto& b : sim.candidates) {
      if (a == b) continue;
      const auto& pa = *sim.doc.path_of(a.bid);
      const auto& pb = *sim.doc.path_of(b.bid);
      const bool same_cluster = std::equal(pa.begin(), pa.end() - 1, pb.begin());
      CHECK(dom::dom_distance(sim.doc, a, b) == (same_cluster ? 3u : 7u));
    }
  }
  for (const auto& alt : sim.alternatives) {
    CHECK(alt.size() == 2);
    CHECK(dom::dom_distance(sim.doc, alt[0], alt[1]) == 3);
  }
  CHECK(simulate_partitioning(sim, sim.alternatives[0], "random", 1, 9) ==
        simulate_partitioning(sim, sim.alternatives[0], "random", 1, 9));
  CHECK_THROWS_AS(simulate_partitioning(sim, sim.alternatives[0], "fps", 0, 9), PreconditionViolated);
  CHECK_THROWS_AS(make_synthetic_case({2, 3, 4, 2, 3}, rng), PreconditionViolated);

  SUBCASE("localized multi-element failure sets favor farthest-point chunks") {
    const auto t = run_partition_study(spec, 10, 20, 42);
    CHECK(t.setting_a.fps_mean <= t.setting_a.random_mean);
    CHECK(t.setting_b.fps_mean <= t.setting_b.random_mean);
  }
  SUBCASE("a single failing element on symmetric trees costs the same either way") {
    const SyntheticSpec sym{4, 3, 3, 1, 1};
    std::mt19937_64 r(11);
    double fps = 0, random = 0;
    for (int c = 0; c < 100; ++c) {
      const auto s = make_synthetic_case(sym, r);
      fps += simulate_partitioning(s, s.alternatives[0], "fps", 50, static_cast<std::uint64_t>(c));
      random += simulate_partitioning(s, s.alternatives[0], "random", 50, static_cast<std::uint64_t>(c));
    }
    CHECK(std::abs(fps - random) / random < 0.05);
  }
}
