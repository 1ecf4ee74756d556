#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "obsr/dom/document.hpp"
#include "obsr/error.hpp"
#include "obsr/reduce/gepa.hpp"
#include "obsr/reduce/tree_prune.hpp"

using namespace obsr;
using namespace obsr::reduce;
using dom::parse_html;
using dom::serialize;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream f(std::filesystem::path(OBSR_FIXTURE_DIR) / "gepa" / name);
  REQUIRE(f.good());
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string run(std::string_view html, std::string_view goal, std::string_view history, GepaProgram p) {
  return serialize(run_gepa_program(parse_html(html), goal, history, p));
}

}  // namespace

TEST_CASE("program names") {
  CHECK(parse_gepa_program("seed") == GepaProgram::Seed);
  CHECK(parse_gepa_program("workarena_r02") == GepaProgram::WorkArenaR02);
  CHECK(parse_gepa_program("weblinx_r02") == GepaProgram::WebLinxR02);
  CHECK(to_string(GepaProgram::WebLinxR02) == "weblinx_r02");
  CHECK_THROWS_AS(parse_gepa_program("weblinx_r05"), ConfigError);
}

TEST_CASE("hand-traced golden page") {
  const auto page = read_fixture("page.html");
  const auto c = nlohmann::json::parse(read_fixture("case.json"));
  const auto history = join_history(c["action_history"].get<std::vector<std::string>>());
  const std::string goal = c["goal"];
  for (auto p : {GepaProgram::Seed, GepaProgram::WorkArenaR02, GepaProgram::WebLinxR02}) {
    INFO(to_string(p));
    const auto expected = read_fixture("expected_" + std::string(to_string(p)) + ".html");
    CHECK(run(page, goal, history, p) == expected);
  }
}

TEST_CASE("seed program") {
  SUBCASE("keyword div and its ancestors survive, unrelated divs go") {
    const auto out = run(
        R"(<html><body bid="0"><div bid="1"><div bid="2">network settings</div></div><div bid="3">weather</div>)"
        R"(<div bid="4"><span bid="5">lunch</span></div></body></html>)",
        "open the network page", "", GepaProgram::Seed);
    CHECK(out == R"(<html><body bid="0"><div bid="1"><div bid="2">network settings</div></div></body></html>)");
  }
  SUBCASE("buttons are always retained") {
    const auto out = run(R"(<div bid="1"><button bid="2">zzz</button></div><button bid="3">qqq</button><p bid="4">x</p>)",
                         "unrelated goal", "", GepaProgram::Seed);
    CHECK(out == R"(<div bid="1"><button bid="2">zzz</button></div><button bid="3">qqq</button>)");
  }
  SUBCASE("short keywords are ignored") {
    CHECK(run(R"(<p bid="1">go</p>)", "go to it", "", GepaProgram::Seed).empty());
    CHECK(run(R"(<p bid="1">go</p>)", "going", "", GepaProgram::Seed) == R"(<p bid="1">go</p>)");
  }
  SUBCASE("elements without a bid are untouched") {
    const auto out = run(R"(<section><p>free text</p><p bid="1">x</p></section>)", "nothing", "", GepaProgram::Seed);
    CHECK(out == R"(<section><p>free text</p></section>)");
  }
}

TEST_CASE("workarena program") {
  SUBCASE("acted-on bids are kept regardless of keywords") {
    const auto out = run(R"(<html><body><div bid="a1"><span bid="a7">qqq</span><span bid="a8">zzz</span></div></body></html>)",
                         "unrelated", "click('a7')", GepaProgram::WorkArenaR02);
    CHECK(out == R"(<html><body><div bid="a1"><span bid="a7">qqq</span></div></body></html>)");
  }
  SUBCASE("two-argument fill does not match the action pattern") {
    const auto out = run(R"(<span bid="a7">qqq</span>)", "unrelated", "fill('a7', 'x')", GepaProgram::WorkArenaR02);
    CHECK(out.empty());
  }
  SUBCASE("attributes are filtered and strings collapsed") {
    const auto out = run(
        "<div bid=\"1\" class=\"c\" style=\"s\" aria-label=\"network\">\n  Network\n\n  status  <b>bold</b><i>network</i></div>",
        "network", "", GepaProgram::WorkArenaR02);
    CHECK(out == R"(<div bid="1" aria-label="network">Network status<i>network</i></div>)");
  }
  SUBCASE("ancestor walk stops at body") {
    const auto out = run(R"(<html bid="h"><body bid="b"><p bid="1">network</p></body></html>)", "network", "",
                         GepaProgram::WorkArenaR02);
    CHECK(out == R"(<html bid="h"><body bid="b"><p bid="1">network</p></body></html>)");
    const auto out2 = run(R"(<html bid="h"><body bid="b"><p bid="1">network</p></body></html>)", "zzz", "click('1')",
                          GepaProgram::WorkArenaR02);
    CHECK(out2.empty());
  }
}

TEST_CASE("weblinx program") {
  SUBCASE("contenteditable regions keep their bid descendants") {
    const std::string html =
        R"(<html><body><div bid="e1" contenteditable="true" class="x"><span bid="e2">abc</span>typed</div>)"
        R"(<p bid="p1">Network status</p><p bid="p2" title="issue tracker"></p>)"
        R"(<meta bid="m1" name="description" content="zzz"><p bid="p3">lunch</p></body></html>)";
    CHECK(run(html, "network issue", "", GepaProgram::WebLinxR02) ==
          R"(<html><body><div bid="e1" contenteditable="true"><span bid="e2">abc</span>typed</div>)"
          R"(<p bid="p1">Network status</p><p bid="p2" title="issue tracker"></p>)"
          R"(<meta bid="m1" name="description" content="zzz"></body></html>)");
  }
  SUBCASE("text survives only under kept parents") {
    CHECK(run(R"(<html><body>top<div>inner<button bid="1">Go</button></div></body></html>)", "zzz", "",
              GepaProgram::WebLinxR02) == R"(<html><body>top<button bid="1">Go</button></body></html>)");
  }
  SUBCASE("nothing kept yields an empty page") {
    CHECK(run(R"(<div bid="1">zzz</div>)", "abc", "", GepaProgram::WebLinxR02) == "<html><body></body></html>");
  }
}
