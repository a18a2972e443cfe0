#include <doctest.h>

#include "../support/oracles.hpp"
#include "zipstream/io.hpp"
#include "zipstream/transform.hpp"

using namespace zs;

TEST_SUITE("io") {
  TEST_CASE("graph json round trip") {
    for (auto f : {"morse.zs", "morse2.zs", "mix.zs", "alt.zs"}) {
      auto g = build_ngraph(flatten(load_spec(oracle::fixture(f))));
      auto h = graph_from_json(graph_to_json(g));
      CHECK(h.out == g.out);
      CHECK(h.succ == g.succ);
      CHECK(h.names == g.names);
      CHECK(h.root == g.root);
      CHECK(h.cobasis == g.cobasis);
    }
    auto j = graph_to_json(build_ngraph(load_spec(oracle::fixture("morse.zs"))));
    CHECK(j.dump() ==
          R"({"cobasis":"n","k":2,"root":0,"nodes":[{"id":0,"label":"M","out":"0","succ":[1,2],"arity":2},{"id":1,"label":"0:X","out":"0","succ":[1,2],"arity":2},{"id":2,"label":"1:Y","out":"1","succ":[2,1],"arity":2}]})");
  }

  TEST_CASE("malformed graphs") {
    using J = nlohmann::ordered_json;
    CHECK_THROWS_AS(graph_from_json(J::parse(R"({"cobasis":"n","root":0,"nodes":[{"id":0,"out":"a","succ":[1,0]}]})")), FormatError);
    CHECK_THROWS_AS(graph_from_json(J::parse(R"({"cobasis":"q","root":0,"nodes":[{"id":0,"out":"a","succ":[0,0]}]})")), FormatError);
    CHECK_THROWS_AS(graph_from_json(J::parse(R"({"cobasis":"n","root":0,"nodes":[{"id":0,"out":"a","succ":[0]}]})")), FormatError);
    CHECK_THROWS_AS(graph_from_json(J::parse(R"({"cobasis":"n","nodes":[{"id":0,"out":"a","succ":[0,0]}]})")), FormatError);
  }

  TEST_CASE("dot output") {
    auto dot = graph_to_dot(build_ngraph(load_spec(oracle::fixture("morse.zs"))));
    CHECK(dot.find("n0 -> n1 [label=\"even\"]") != std::string::npos);
    CHECK(dot.find("n2 -> n1 [label=\"odd\"]") != std::string::npos);
    CHECK(dot.find("__start -> n0") != std::string::npos);
  }
}
