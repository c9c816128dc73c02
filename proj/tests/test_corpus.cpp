#include <fstream>
#include <sstream>

#include "doctest.h"

#include "corpus.hpp"
#include "vfg/gfg.hpp"
#include "vfg/iso.hpp"
#include "vfg/report.hpp"

using namespace vfg;

TEST_CASE("corpus entries validate and match their fixtures")
{
  CHECK(corpus_names().size() >= 9);
  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto g = corpus(name);
    CHECK(validation_report(g)["valid"] == true);

    std::ifstream in(std::string(VFG_CORPUS_DIR) + "/" + name + ".expected.json");
    REQUIRE(in);
    auto expected = nlohmann::json::parse(in);
    auto got = analysis_report(g);
    CHECK(got == expected);
    CHECK(dump(got) == dump(analysis_report(g)));
  }
}

TEST_CASE("gfg round trip keeps the canonical key")
{
  for (auto const &name : corpus_names()) {
    CAPTURE(name);
    auto g = corpus(name);
    auto text = serialize_gfg(g);
    auto back = parse_gfg(text);
    CHECK(canonical_key(back) == canonical_key(g));
    CHECK(serialize_gfg(back) == text);
  }
}

TEST_CASE("gfg diagnostics")
{
  CHECK_THROWS_AS(parse_gfg("{\"version\": \"gfg-1\", \"vertices\": ["), ParseError);
  CHECK_THROWS_AS(parse_gfg("{\"version\": \"gfg-0\", \"vertices\": [], \"edges\": []}"),
                  ParseError);

  auto bad = gfg_to_json(corpus("sl2z"));
  bad["edges"][0]["to"] = "nowhere";
  try {
    gfg_from_json(bad);
    FAIL("accepted an edge to a missing vertex");
  } catch (Error const &e) {
    CHECK(std::string(e.what()).find("edges[0].to") != std::string::npos);
  }
}
