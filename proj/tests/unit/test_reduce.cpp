#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "obsr/dom/document.hpp"
#include "obsr/error.hpp"
#include "obsr/reduce/prompts.hpp"
#include "obsr/reduce/providers.hpp"
#include "obsr/reduce/prune4web.hpp"
#include "obsr/reduce/reducers.hpp"
#include "obsr/reduce/retrieval.hpp"
#include "obsr/reduce/tree_prune.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "support/prune.hpp"

using namespace obsr;
using namespace obsr::reduce;
using dom::DomDocument;
using dom::Node;
using dom::parse_html;
using testing::ascii_lower_words;
using testing::expected_retained;

namespace {

ReductionRequest request(DomDocument doc, std::optional<std::size_t> k = std::nullopt, std::string goal = "",
                         std::vector<std::string> history = {}) {
  ReductionRequest r{std::move(doc), std::move(goal), std::move(history), k, std::nullopt, std::nullopt};
  return r;
}

std::set<std::string> bid_set(const DomDocument& doc) { return {doc.bids().begin(), doc.bids().end()}; }

const std::string kShop =
    R"(<html><body bid="1"><div bid="2"><input bid="3" name="q" placeholder="Search products">)"
    R"(<button bid="4" class="btn">Search</button></div><ul bid="5"><li bid="6">Shoes</li><li bid="7">Hats</li>)"
    R"(<li bid="8">Coats</li></ul><div bid="9" aria-label="search box">x</div></body></html>)";

}  // namespace

TEST_CASE("retrieval query format") {
  const std::string goal = R"(Create a new change request with short description "Network issue")";
  const std::vector<std::string> history = {"fill('a196', 'CHG0000013')", "fill('a671', 'Ernest piquance...')",
                                            "click('a340')"};
  CHECK(build_query(goal, history) ==
        "Goal: Create a new change request with short description \"Network issue\"\n"
        "\n"
        "Previous Actions:\n"
        "- Step 0: fill('a196', 'CHG0000013')\n"
        "- Step 1: fill('a671', 'Ernest piquance...')\n"
        "- Step 2: click('a340')");
  CHECK(build_query("g", {}) == "Goal: g\n\nPrevious Actions:");
  CHECK(build_query("g", {"click('a1')"}) == "Goal: g\n\nPrevious Actions:\n- Step 0: click('a1')");
}

TEST_CASE("element representation") {
  const auto doc = parse_html(
      R"(<html><body><div><form><button bid="a585" class="btn-primary" id="submit-btn" role="button" )"
      R"x(onclick="go()">Submit Form<span></span></button></form></div></body></html>)x");
  CHECK(element_repr(doc, "a585") ==
        "[[tag]] button\n"
        "[[xpath]] /html/body/div/form/button\n"
        "[[bid]] a585\n"
        "[[text]] Submit Form\n"
        "[[attributes]] class='btn-primary' id='submit-btn' role='button'\n"
        "[[children]] span");
  CHECK_THROWS_AS(element_repr(doc, "zz"), UnknownBid);

  SUBCASE("no qualifying attributes") {
    const auto d = parse_html(R"(<div bid="1" style="x" onclick="y">t</div>)");
    CHECK(element_repr(d, "1") == "[[tag]] div\n[[xpath]] /div\n[[bid]] 1\n[[text]] t\n[[attributes]]\n[[children]]");
  }
  SUBCASE("children capped at five") {
    const auto d = parse_html(R"(<ul bid="1"><li></li><li></li><b></b><li></li><i></i><u></u><li></li><p></p></ul>)");
    CHECK(element_repr(d, "1").ends_with("\n[[children]] li li b li i"));
  }
  SUBCASE("text and attribute truncation") {
    const std::string long_text(250, 'x');
    const std::string long_value(150, 'v');
    const auto d = parse_html(R"(<p bid="1" title=")" + long_value + R"(">)" + long_text + "</p>");
    const auto r = element_repr(d, "1");
    CHECK(r.find("[[text]] " + std::string(200, 'x') + "\n") != std::string::npos);
    CHECK(r.find("title='" + std::string(100, 'v') + "'") != std::string::npos);
    CHECK(r.find(std::string(101, 'v')) == std::string::npos);
  }
  SUBCASE("positional xpath only for repeated tags") {
    const auto d = parse_html(R"(<html><body><div></div><div><p bid="1"></p></div><span></span></body></html>)");
    CHECK(xpath_of(d, *d.path_of("1")) == "/html/body/div[2]/p");
  }
}

TEST_CASE("tree pruning") {
  SUBCASE("ancestors of a nested selection are kept") {
    const auto doc = parse_html(
        R"(<html><body><div bid="1"><section bid="2"><p bid="3"><b bid="4">x</b></p></section></div><div bid="5">y</div></body></html>)");
    const auto out = tree_prune(doc, std::vector<std::string>{"4"}, TreePruneConfig::axtree());
    CHECK(bid_set(out).contains("1"));
    CHECK(bid_set(out).contains("2"));
    CHECK(bid_set(out).contains("3"));
  }
  SUBCASE("child cap") {
    std::string html = R"(<html><body><div bid="p"><ul bid="u">)";
    for (int i = 0; i < 60; ++i) html += "<li bid=\"c" + std::to_string(i) + "\"></li>";
    html += "</ul></div></body></html>";
    const auto doc = parse_html(html);
    const auto out = tree_prune(doc, std::vector<std::string>{"p"});
    const Node& ul = out.at("u");
    CHECK(ul.children.size() == 50);
    CHECK(out.has_bid("c49"));
    CHECK_FALSE(out.has_bid("c50"));
  }
  SUBCASE("accessibility configuration cuts below depth one") {
    const auto doc = parse_html(
        R"(<html><body><div bid="1"><ul bid="2"><li bid="3">a<span bid="4">b<i bid="5">c</i></span>d</li>)"
        R"(<li bid="6">e</li></ul><p bid="7">f</p></div></body></html>)");
    const auto out = tree_prune(doc, std::vector<std::string>{"2"}, TreePruneConfig::axtree());
    CHECK(dom::serialize(out) ==
          R"(<html><body><div bid="1"><ul bid="2"><li bid="3">ad</li><li bid="6">e</li></ul></div></body></html>)");
  }
  SUBCASE("unselected descendants vanish, ancestors of selections stay") {
    const auto doc = parse_html(
        R"(<html><body><div bid="1"><p bid="2">x<b bid="3">y</b></p><em>z<u bid="4">w</u></em></div></body></html>)");
    const auto out = tree_prune(doc, std::vector<std::string>{"1"}, TreePruneConfig{0, 50, 0});
    CHECK(dom::serialize(out) == R"(<html><body><div bid="1"></div></body></html>)");
    const auto out2 = tree_prune(doc, std::vector<std::string>{"1", "4"}, TreePruneConfig{0, 50, 0});
    CHECK(dom::serialize(out2) == R"(<html><body><div bid="1"><em>z<u bid="4">w</u></em></div></body></html>)");
  }
  SUBCASE("siblings on each side") {
    const auto doc = parse_html(
        R"(<html><body><ul bid="u"><li bid="0"></li><li bid="1"></li><li bid="2"></li><li bid="3"></li>)"
        R"(<li bid="4"></li><li bid="5"></li><li bid="6"></li><li bid="7"></li><li bid="8"></li></ul></body></html>)");
    const auto out = tree_prune(doc, std::vector<std::string>{"4"}, TreePruneConfig{0, 50, 3});
    CHECK(out.bids() == std::vector<std::string>{"u", "1", "2", "3", "4", "5", "6", "7"});
  }
  SUBCASE("unknown bids are rejected") {
    const auto doc = parse_html(kShop);
    CHECK_THROWS_AS(tree_prune(doc, std::vector<std::string>{"nope"}), UnknownBid);
  }
  SUBCASE("empty selection leaves the skeleton") {
    const auto doc = parse_html(R"(<html><body bid="b"><div bid="1">x</div>t</body></html>)");
    CHECK(dom::serialize(tree_prune(doc, std::vector<std::string>{})) == R"(<html><body bid="b">t</body></html>)");
  }
}

TEST_CASE("tree pruning agrees with the retention rule on random documents") {
  std::mt19937_64 rng(99);
  const std::vector<TreePruneConfig> configs = {TreePruneConfig::standard(), TreePruneConfig::axtree(), {2, 2, 1},
                                                {0, 50, 0}};
  for (int trial = 0; trial < 200; ++trial) {
    const auto doc = testing::random_document(rng, {4, 5, 0.6, 0.4});
    const auto& cfg = configs[static_cast<std::size_t>(trial) % configs.size()];
    std::vector<std::string> selected;
    for (const auto& b : doc.bids()) {
      if (testing::pick(rng, 6) == 0) selected.push_back(b);
    }
    const auto out = tree_prune(doc, selected, cfg);
    INFO(dom::serialize(doc));
    CHECK(out.bids() == expected_retained(doc, selected, cfg));
    for (const auto& b : out.bids()) {
      CHECK(out.at(b).attributes == doc.at(b).attributes);
      CHECK(out.at(b).direct_text() == doc.at(b).direct_text());
    }
  }
}

TEST_CASE("random selection") {
  const auto doc = parse_html(kShop);
  CHECK_THROWS_AS(reduce_random(request(doc), 1), MissingK);
  CHECK(reduce_random(request(doc, 100), 3) == doc);
  CHECK(reduce_random(request(doc, 3), 17) == reduce_random(request(doc, 3), 17));

  SUBCASE("each element is equally likely") {
    std::string html = "<html><body>";
    for (int i = 0; i < 100; ++i) html += "<div><p bid=\"" + std::to_string(i) + "\"></p></div>";
    html += "</body></html>";
    const auto big = parse_html(html);
    std::map<std::string, int> counts;
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s) {
      const auto out = reduce_random(request(big, 1), static_cast<std::uint64_t>(s));
      REQUIRE(out.bids().size() == 1);
      ++counts[out.bids()[0]];
    }
    double chi2 = 0;
    for (int i = 0; i < 100; ++i) {
      const double c = counts[std::to_string(i)];
      CHECK(std::abs(c / seeds - 0.01) <= 0.005);
      CHECK(c >= 50);
      CHECK(c <= 150);
      chi2 += (c - 100.0) * (c - 100.0) / 100.0;
    }
    // 99 degrees of freedom, p = 0.001.
    CHECK(chi2 < 148.2);
  }
}

TEST_CASE("accessibility-tree selection") {
  const auto doc = parse_html(R"(<html><body><div bid="1"><button bid="2">Go</button></div></body></html>)");
  CHECK(heuristic_axtree_bids(doc) == std::vector<std::string>{"2"});
  const auto all = std::optional<std::vector<std::string>>(doc.bids());
  CHECK(reduce_axtree(request(doc), all) == tree_prune(doc, doc.bids(), TreePruneConfig::axtree()));
  CHECK(dom::serialize(reduce_axtree(request(doc), std::vector<std::string>{})) == "<html><body></body></html>");
  CHECK(reduce_axtree(request(doc)) == tree_prune(doc, std::vector<std::string>{"2"}, TreePruneConfig::axtree()));
  auto req = request(doc);
  req.axtree_bids = std::vector<std::string>{"1", "ghost"};
  CHECK(reduce_axtree(req) == tree_prune(doc, std::vector<std::string>{"1"}, TreePruneConfig::axtree()));
  const auto rich = parse_html(R"(<div bid="a" role="tab"></div><span bid="b" tabindex="0"></span><p bid="c"></p>)"
                               R"(<i bid="d" aria-label="x"></i><label bid="e"></label>)");
  CHECK(heuristic_axtree_bids(rich) == std::vector<std::string>{"a", "b", "d", "e"});
}

TEST_CASE("bm25 retrieval") {
  SUBCASE("three element corpus against the closed form") {
    const auto doc = parse_html(
        R"(<html><body><button bid="1">Submit form</button><input bid="2" name="search" placeholder="search box">)"
        R"(<a bid="3" href="/help">Help</a></body></html>)");
    const auto query = build_query("search for the help page", {"click('3')"});
    std::vector<std::vector<std::string>> corpus;
    for (const auto& b : doc.bids()) corpus.push_back(ascii_lower_words(element_repr(doc, b)));
    const auto want = testing::bm25_reference(corpus, ascii_lower_words(query));
    const auto got = bm25_scores(doc, query);
    REQUIRE(got.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(got[i].score - want[i]) < 1e-9);
    auto out = reduce_dmr_bm25(request(doc, 1, "search for the help page", {"click('3')"}));
    std::size_t best = static_cast<std::size_t>(std::max_element(want.begin(), want.end()) - want.begin());
    CHECK(out.has_bid(doc.bids()[best]));
  }
  SUBCASE("random corpora of at most ten elements") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
      const auto doc = testing::random_document(rng, {2, 3, 0.7, 0.5});
      if (doc.bids().size() > 10) continue;
      const auto query = build_query(testing::random_words(rng, 5), {});
      std::vector<std::vector<std::string>> corpus;
      for (const auto& b : doc.bids()) corpus.push_back(ascii_lower_words(element_repr(doc, b)));
      const auto want = testing::bm25_reference(corpus, ascii_lower_words(query));
      const auto got = bm25_scores(doc, query);
      for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i].score - want[i]) < 1e-9);
      std::vector<std::size_t> order(want.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return want[a] > want[b]; });
      const auto top = top_k(got, 3);
      for (std::size_t i = 0; i < top.size(); ++i) CHECK(top[i] == doc.bids()[order[i]]);
    }
  }
  SUBCASE("no shared token falls back to document order") {
    const auto doc = parse_html(R"(<html><body><p bid="x">alpha</p><p bid="y">beta</p><p bid="z">gamma</p></body></html>)");
    const auto scored = bm25_scores(doc, "qqq");
    for (const auto& s : scored) CHECK(s.score == 0.0);
    CHECK(top_k(scored, 2) == std::vector<std::string>{"x", "y"});
  }
  CHECK_THROWS_AS(reduce_dmr_bm25(request(parse_html(kShop))), MissingK);
}

TEST_CASE("dense retrieval") {
  const HashingEmbedder emb;
  const auto v = emb.embed(std::vector<std::string>{"search box now", "now box search", "unrelated words"});
  CHECK(cosine_similarity(v[0], v[1]) == doctest::Approx(1.0));
  CHECK(cosine_similarity(v[0], v[0]) == doctest::Approx(1.0));
  const auto doc = parse_html(
      R"(<html><body><p bid="1">weather forecast</p><p bid="2">create change request network issue</p></body></html>)");
  const auto scored = dense_scores(doc, "create change request network issue", emb);
  CHECK(scored[1].score > scored[0].score);
  CHECK(top_k(scored, 1) == std::vector<std::string>{"2"});
  CHECK(reduce_dmr_dense(request(doc, 50), emb) == doc);
  CHECK_THROWS_AS(reduce_dmr_dense(request(doc), emb), MissingK);
  struct Broken final : EmbeddingProvider {
    std::vector<Embedding> embed(std::span<const std::string>) const override { throw ProviderUnavailable("down"); }
  };
  CHECK_THROWS_AS(reduce_dmr_dense(request(doc, 1), Broken{}), ProviderUnavailable);
}

TEST_CASE("response parsers") {
  SUBCASE("query generation") {
    CHECK(parse_querygen_response("<think>x</think><query>change request form</query>") == "change request form");
    CHECK(parse_querygen_response("<query>\n  network issue \n</query>") == "network issue");
    CHECK_THROWS_AS(parse_querygen_response("<think>only thoughts</think>"), MalformedResponse);
  }
  SUBCASE("bid lists") {
    CHECK(parse_focusagent_response("<think>t</think><answer>[1, 24, 35]</answer>") ==
          std::vector<std::string>{"1", "24", "35"});
    CHECK(parse_focusagent_response("<answer>['a1', \"b2\", a1]</answer>") == std::vector<std::string>{"a1", "b2"});
    CHECK(parse_focusagent_response("<answer>[]</answer>").empty());
    CHECK_THROWS_AS(parse_focusagent_response("<answer>none</answer>"), MalformedResponse);
    CHECK_THROWS_AS(parse_focusagent_response("[1, 2]"), MalformedResponse);
  }
  SUBCASE("keyword weights") {
    const auto w = parse_filter_response(R"(<answer>{"keyword_weights": {"Search": 40, "input": 30}}</answer>)");
    CHECK(w == KeywordWeights{{"Search", 40.0}, {"input", 30.0}});
    CHECK(parse_filter_response(R"(<answer>{"keyword_weights": {}}</answer>)").empty());
    CHECK_THROWS_AS(parse_filter_response(R"(<answer>{"keyword_weights": {"a": "high"}}</answer>)"),
                    MalformedResponse);
    CHECK_THROWS_AS(parse_filter_response(R"(<answer>{"keyword_weights": {"a": 0}}</answer>)"), MalformedResponse);
    CHECK_THROWS_AS(parse_filter_response(R"({"keyword_weights": {"a": 1}})"), MalformedResponse);
    CHECK_THROWS_AS(parse_filter_response("<answer>{not json}</answer>"), MalformedResponse);
  }
  SUBCASE("agent actions") {
    CHECK(parse_agent_action("<think>x</think><action>click('a1')</action>") == "click('a1')");
    CHECK(parse_agent_action("click('a2')") == "click('a2')");
  }
}

TEST_CASE("prompt builders") {
  const auto fa = build_focusagent_prompt("Buy shoes", {"click('1')"}, "<p>x</p>", 7);
  CHECK(fa.user.find("You MUST select exactly 7 elements") != std::string::npos);
  CHECK(fa.user.find("- Step 0: click('1')") != std::string::npos);
  CHECK(fa.user.find("<p>x</p>") != std::string::npos);
  CHECK(fa.user.find('{') == std::string::npos);
  const auto qg = build_querygen_prompt("Buy shoes", {});
  CHECK(qg.user.find("Buy shoes") != std::string::npos);
  CHECK(qg.user.find("None") != std::string::npos);
  const auto planner = build_planner_prompt("Buy shoes", {}, kDefaultActionSpace, std::string("shot-1"));
  CHECK(planner.image_ref == std::optional<std::string>("shot-1"));
  CHECK(planner.system.find("click(bid)") != std::string::npos);
  CHECK(build_filter_prompt("PLAN").user == "PLAN");
  CHECK(render_template("{a} {b} {c}", {{"a", "1"}, {"b", "{c}"}}) == "1 {c} {c}");
}

TEST_CASE("keyword scoring") {
  const auto doc = parse_html(
      R"(<button bid="1">search</button><div bid="2" aria-label="search box"></div><p bid="3">searching forms</p>)"
      R"(<p bid="4" class="serch"></p>)");
  CHECK(prune4web_score(doc.at("1"), {{"search", 40}}) == doctest::Approx(40.0));
  CHECK(prune4web_score(doc.at("2"), {{"search box", 10}}) == doctest::Approx(8.0));
  CHECK(prune4web_score(doc.at("1"), {}) == 0.0);
  CHECK(prune4web_score(doc.at("3"), {{"search", 10}}) == doctest::Approx(6.0));
  CHECK(prune4web_score(doc.at("4"), {{"search", 10}}) ==
        doctest::Approx(10 * 0.4 * testing::ref_ratio("search", "serch") * 0.5));

  SUBCASE("agrees with the reference cascade on random elements") {
    std::mt19937_64 rng(31);
    static const std::vector<std::string> tiers = {"aria-label", "placeholder", "name", "role", "class", "id"};
    for (int trial = 0; trial < 500; ++trial) {
      Node el = Node::element("div");
      if (testing::pick(rng, 4) != 0) el.children.push_back(Node::text_node(testing::random_words(rng, 3)));
      el.children.push_back(Node::element("span", {}, {Node::text_node("search")}));
      if (testing::pick(rng, 3) == 0) el.children.push_back(Node::text_node(" " + testing::random_words(rng, 2)));
      for (const auto& a : tiers) {
        if (testing::pick(rng, 2) == 0) el.attributes.push_back({a, testing::random_words(rng, 3)});
      }
      KeywordWeights w;
      for (std::size_t i = testing::pick(rng, 4); i > 0; --i) {
        w.emplace_back(testing::random_words(rng, 2), 1.0 + static_cast<double>(testing::pick(rng, 50)));
      }
      CHECK(prune4web_score(el, w) == doctest::Approx(testing::cascade_reference(el, w)).epsilon(1e-12));
    }
  }
  SUBCASE("top-k selection") {
    const auto shop = parse_html(kShop);
    const auto out = reduce_prune4web(request(shop, 1), {{"hats", 50}});
    CHECK(out.has_bid("7"));
    CHECK_FALSE(out.has_bid("2"));
    CHECK(reduce_prune4web(request(shop, 100), {{"zzz", 1}}) == shop);
    CHECK(reduce_prune4web(request(shop, 2), {{"zzz", 1}}) == tree_prune(shop, std::vector<std::string>{"1", "2"}));
    CHECK_THROWS_AS(reduce_prune4web(request(shop), {}), MissingK);
  }
}

TEST_CASE("model-backed reducers with canned replies") {
  const auto shop = parse_html(kShop);
  SUBCASE("focused selection drops unknown bids") {
    const CannedCompletion llm(std::vector<CannedCompletion::Entry>{{"", "<think>t</think><answer>[7, 99, 7]</answer>"}});
    CHECK(reduce_focusagent(request(shop, 2), llm) == tree_prune(shop, std::vector<std::string>{"7"}));
  }
  SUBCASE("generated query drives dense ranking") {
    const CannedCompletion llm(std::vector<CannedCompletion::Entry>{{"", "<query>Coats</query>"}});
    const HashingEmbedder emb;
    const auto out = reduce_dmr_querygen(request(shop, 1, "g"), llm, emb);
    const auto want = top_k(dense_scores(shop, "Coats", emb), 1);
    CHECK(out == tree_prune(shop, want));
  }
  SUBCASE("planner output feeds the filter") {
    std::vector<CompletionRequest> seen;
    const FunctionCompletion llm([&](const CompletionRequest& r) -> std::string {
      seen.push_back(r);
      if (seen.size() == 1) return "PLAN: click the hats entry";
      return R"(<answer>{"keyword_weights": {"Hats": 50}}</answer>)";
    });
    auto req = request(shop, 1, "find hats");
    req.screenshot_ref = "shot.png";
    const auto out = reduce_prune4web_pipeline(req, llm);
    REQUIRE(seen.size() == 2);
    CHECK(seen[0].image_ref == std::optional<std::string>("shot.png"));
    CHECK(seen[1].user == "PLAN: click the hats entry");
    CHECK(out == reduce_prune4web(request(shop, 1), {{"Hats", 50}}));
  }
  SUBCASE("provider failures propagate") {
    const CannedCompletion llm(std::vector<CannedCompletion::Entry>{{"never matches", "x"}});
    CHECK_THROWS_AS(reduce_focusagent(request(shop, 2), llm), ProviderUnavailable);
  }
}

TEST_CASE("method specs and the registry") {
  const auto s = MethodSpec::parse("random:k=10,seed=7");
  CHECK(s.method_id == "random");
  CHECK(s.k == std::optional<std::size_t>(10));
  CHECK(s.seed == 7);
  CHECK(s.label() == "random:k=10,seed=7");
  CHECK(MethodSpec::parse("random").label() == "random:seed=0");
  CHECK(MethodSpec::parse("gepa:program=seed").label() == "gepa:program=seed");
  CHECK(MethodSpec::parse("prune4web:weights=w.json,k=3").label() == "prune4web:k=3,weights=w.json");
  CHECK_THROWS_AS(MethodSpec::parse("random:k=0"), ConfigError);
  CHECK_THROWS_AS(MethodSpec::parse("random:k=x"), ConfigError);
  CHECK_THROWS_AS(MethodSpec::parse("random:k"), ConfigError);
  CHECK_THROWS_AS(MethodSpec::parse(":k=1"), ConfigError);

  CHECK(registered_methods().size() == 9);
  CHECK_THROWS_AS(make_reducer(MethodSpec::parse("nosuch")), ConfigError);
  CHECK_THROWS_AS(make_reducer(MethodSpec::parse("dmr-dense:k=3")), ConfigError);
  CHECK_THROWS_AS(make_reducer(MethodSpec::parse("focusagent:k=3")), ConfigError);
  CHECK_THROWS_AS(make_reducer(MethodSpec::parse("gepa")), ConfigError);
  CHECK_THROWS_AS(make_reducer(MethodSpec::parse("gepa:program=other")), ConfigError);
  CHECK_THROWS_AS(make_reducer(MethodSpec::parse("prune4web:k=2,weights=/nonexistent.json")), ConfigError);

  const auto shop = parse_html(kShop);
  const auto r = make_reducer(MethodSpec::parse("random:k=2,seed=4"));
  CHECK(r->method_id() == "random");
  CHECK(r->reduce(request(shop)) == reduce_random(request(shop, 2), 4));
  CHECK(r->reduce(request(shop, 5)) == reduce_random(request(shop, 5), 4));
  CHECK_THROWS_AS(make_reducer(MethodSpec::parse("random"))->reduce(request(shop)), MissingK);
}

TEST_CASE("every reducer returns a subset of its input") {
  const auto shared_emb = std::make_shared<HashingEmbedder>();
  auto llm = std::make_shared<FunctionCompletion>([](const CompletionRequest& r) -> std::string {
    if (r.system == build_filter_prompt("").system) return R"(<answer>{"keyword_weights": {"search": 5}}</answer>)";
    if (r.user.find("You MUST select exactly") != std::string::npos) return "<answer>[1, 3, 5, 999]</answer>";
    if (r.system == build_querygen_prompt("", {}).system) return "<query>search words</query>";
    return "plan";
  });
  const ProviderSet providers{shared_emb, llm};
  std::vector<std::unique_ptr<Reducer>> reducers;
  for (const char* spec : {"original", "random:k=3,seed=1", "axtree", "dmr-bm25:k=3", "dmr-dense:k=3",
                           "dmr-querygen:k=3", "focusagent:k=3", "prune4web:k=3", "gepa:program=seed",
                           "gepa:program=workarena_r02", "gepa:program=weblinx_r02"}) {
    reducers.push_back(make_reducer(MethodSpec::parse(spec), providers));
  }
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    const auto doc = testing::random_document(rng);
    const auto req = request(doc, std::nullopt, "search " + testing::random_words(rng, 3), {"click('1')"});
    for (const auto& r : reducers) {
      INFO(r->method_id());
      const auto out = r->reduce(req);
      CHECK(out == r->reduce(req));
      for (const auto& b : out.bids()) {
        REQUIRE(doc.has_bid(b));
        for (const auto& a : out.at(b).attributes) {
          const auto* v = doc.at(b).attr(a.name);
          REQUIRE(v != nullptr);
          CHECK(*v == a.value);
        }
      }
      CHECK(dom::char_length(out) <= dom::char_length(doc));
    }
  }
}
