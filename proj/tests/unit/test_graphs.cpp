#include <doctest.h>

#include <set>

#include "../support/oracles.hpp"
#include "zipstream/analysis.hpp"
#include "zipstream/graphs.hpp"
#include "zipstream/transform.hpp"

using namespace zs;

namespace {

ObsGraph graph_of(const std::string& f) { return build_ngraph(flatten(load_spec(oracle::fixture(f)))); }

std::set<std::pair<std::string, std::string>> named(const ObsGraph& a, const ObsGraph& b, const BisimWitness& w) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [x, y] : w.relation) out.emplace(a.names[x], b.names[y]);
  return out;
}

// Each related pair has equal outputs and related successors.
bool is_bisimulation(const ObsGraph& a, const ObsGraph& b, const std::vector<std::pair<std::size_t, std::size_t>>& rel) {
  std::set<std::pair<std::size_t, std::size_t>> r(rel.begin(), rel.end());
  for (auto [x, y] : rel) {
    if (a.out[x] != b.out[y] || a.arity(x) != b.arity(y)) return false;
    for (std::size_t i = 0; i < a.arity(x); ++i)
      if (!r.count({a.succ[x][i], b.succ[y][i]})) return false;
  }
  return r.count({a.root, b.root}) == 1;
}

}  // namespace

TEST_SUITE("graphs") {
  TEST_CASE("Thue-Morse observation graph") {
    auto g = build_ngraph(load_spec(oracle::fixture("morse.zs")));
    REQUIRE(g.size() == 3);
    CHECK(g.names == std::vector<std::string>{"M", "0:X", "1:Y"});
    CHECK(g.out == std::vector<Symbol>{"0", "0", "1"});
    CHECK(g.succ == std::vector<std::vector<std::size_t>>{{1, 2}, {1, 2}, {2, 1}});
    auto m = minimize(g);
    CHECK(m.size() == 2);
    for (std::uint64_t n = 0; n < 1024; ++n) {
      CHECK(interpret(g, n) == oracle::thue_morse(n));
      CHECK(oracle::graph_at(g, g.root, n) == oracle::thue_morse(n));
      CHECK(interpret(m, n) == oracle::thue_morse(n));
    }
  }

  TEST_CASE("graphs interpret to the evaluated stream on random flat specifications") {
    oracle::Rng rng(31);
    for (int trial = 0; trial < 80; ++trial) {
      std::uint64_t k = oracle::uniform(rng, 2, 4);
      auto s = oracle::random_flat_spec(rng, oracle::uniform(rng, 1, 6), k, 2);
      auto g = build_ngraph(s);
      auto p = eval_prefix(s, 300);
      for (std::size_t n = 0; n < p.size(); ++n) {
        REQUIRE(interpret(g, n) == p[n]);
        REQUIRE(oracle::graph_at(g, g.root, n) == p[n]);
      }
      auto m = minimize(g);
      auto classes = oracle::moore_classes(g);
      std::set<std::size_t> reach_classes;
      for (auto v : reachable(g)) reach_classes.insert(classes[v]);
      CHECK(m.size() == reach_classes.size());
      CHECK(graph_prefix(m, 300) == p);
    }
  }

  TEST_CASE("zip-mix graph") {
    auto g = graph_of("mix.zs");
    CHECK(g.cobasis == Cobasis::Mix);
    CHECK(minimize(g).size() == 3);
    CHECK(oracle::join(graph_prefix(g, 29)) == "abbabbaabbbaaaabbbbbbaaaababa");
  }

  TEST_CASE("bisimulation between the two Thue-Morse specifications") {
    auto s1 = load_spec(oracle::fixture("morse.zs")), s2 = load_spec(oracle::fixture("morse2.zs"));
    auto g1 = build_ngraph(s1), g2 = build_ngraph(s2);
    auto w = bisimilar(g1, g2);
    REQUIRE(w.bisimilar);
    CHECK(is_bisimulation(g1, g2, w.relation));
    auto rel = named(g1, g2, w);
    for (auto p : std::vector<std::pair<std::string, std::string>>{
             {"M", "N"}, {"0:X", "N"}, {"0:X", "0:1:U"}, {"1:Y", "1:W"}, {"1:Y", "1:V"}})
      CHECK_MESSAGE(rel.count(p) == 1, p.first << " ~ " << p.second);
    auto r = equivalent(s1, s2);
    CHECK(r.equivalent);
  }

  TEST_CASE("inequivalence witnesses are the first difference") {
    auto s1 = load_spec(oracle::fixture("morse.zs")), s2 = load_spec(oracle::fixture("alt.zs"));
    auto r = equivalent(s1, s2);
    CHECK_FALSE(r.equivalent);
    auto pc = prefix_compare(s1, s2, 64);
    REQUIRE(pc.index);
    CHECK(*pc.index == 2);
    bool reported = false;
    for (const auto& w : r.witnesses)
      if (w.index) {
        CHECK(*w.index == 2);
        reported = true;
      }
    CHECK(reported);
    CHECK_THROWS_AS(equivalent(s1, load_spec(oracle::fixture("mix.zs"))), DifferentK);
    CHECK_THROWS_AS(equivalent(s1, parse_spec("A = a:A\nB = zip(A, A)\nroot B")), AlphabetMismatch);
  }

  TEST_CASE("equivalence agrees with prefix comparison on random pairs") {
    oracle::Rng rng(37);
    int eq = 0, neq = 0;
    for (int trial = 0; trial < 200; ++trial) {
      std::uint64_t k = oracle::uniform(rng, 2, 3);
      auto a = oracle::random_flat_spec(rng, oracle::uniform(rng, 1, 4), k, 1, "A");
      auto b = oracle::random_flat_spec(rng, oracle::uniform(rng, 1, 4), k, 1, "B");
      auto ga = build_ngraph(a), gb = build_ngraph(b);
      auto w = bisimilar(ga, gb);
      // Bisimilar graphs with at most 4 + 4 states agree everywhere iff they agree below k^8.
      auto pc = prefix_compare(ga, gb, 6600);
      CHECK(w.bisimilar == pc.equal);
      if (w.bisimilar) {
        CHECK(is_bisimulation(ga, gb, w.relation));
        ++eq;
      } else {
        REQUIRE(w.index);
        CHECK(interpret(ga, *w.index) != interpret(gb, *w.index));
        // Not necessarily the first difference, which prefix comparison finds.
        CHECK(*w.index >= *pc.index);
        ++neq;
      }
    }
    CHECK(neq > 0);
    // A spec is always equivalent to a renamed copy of itself.
    for (int trial = 0; trial < 30; ++trial) {
      auto a = oracle::random_flat_spec(rng, 5, 2, 2, "A");
      auto b = ZipSpec();
      std::string txt = print_spec(a);
      for (auto& c : txt)
        if (c == 'A') c = 'B';
      CHECK(equivalent(a, parse_spec(txt)).equivalent);
      ++eq;
    }
    CHECK(eq > 0);
  }

  TEST_CASE("size bound on observation graphs") {
    auto bound = [](const ZipSpec& flat) {
      std::size_t m = flat.size(), n = std::max<std::size_t>(1, max_prefix(flat)), sigma = flat.alphabet.size();
      return 2 * (sigma + 1) * m * n + 4 * m;
    };
    for (auto f : {"morse.zs", "morse2.zs", "alt.zs", "zeros.zs"}) {
      auto flat = flatten(load_spec(oracle::fixture(f)));
      CHECK_MESSAGE(build_ngraph(flat).size() <= bound(flat), f);
    }
    oracle::Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
      auto s = oracle::random_flat_spec(rng, oracle::uniform(rng, 1, 8), 2, 3);
      CHECK(build_ngraph(s).size() <= bound(s));
    }
  }

  TEST_CASE("N to O conversion") {
    auto g = graph_of("morse.zs");
    auto o = ngraph_to_ograph(g);
    CHECK(o.cobasis == Cobasis::O);
    CHECK(o.size() == 2 * g.size());
    for (std::uint64_t n = 0; n < 512; ++n) {
      CHECK(interpret_ograph(o, n) == interpret_ngraph(g, n));
      CHECK(oracle::graph_at(o, o.root, n) == oracle::thue_morse(n));
    }
    oracle::Rng rng(43);
    for (int trial = 0; trial < 40; ++trial) {
      auto s = oracle::random_flat_spec(rng, oracle::uniform(rng, 1, 5), oracle::uniform(rng, 2, 4), 2);
      auto ng = build_ngraph(s);
      auto og = ngraph_to_ograph(ng);
      for (std::uint64_t n = 0; n < 256; ++n) REQUIRE(interpret_ograph(og, n) == interpret_ngraph(ng, n));
      auto back = ograph_to_spec(og);
      CHECK(eval_prefix(back, 256) == eval_prefix(s, 256));
    }
  }

  TEST_CASE("graph to specification") {
    auto g = minimize(graph_of("morse.zs"));
    REQUIRE(is_zero_invariant(g));
    auto s = ngraph_to_spec(g);
    CHECK(eval_prefix(s, 256) == graph_prefix(g, 256));
    ObsGraph bad;
    bad.add_node("0", "a", 2);
    bad.add_node("1", "b", 2);
    bad.succ = {{1, 0}, {1, 1}};
    std::size_t off = 99;
    CHECK_FALSE(is_zero_invariant(bad, &off));
    CHECK(off == 0);
    CHECK(is_zero_invariant(minimize(graph_of("alt.zs"))));
  }

  TEST_CASE("k-kernel") {
    auto tm = graph_of("morse.zs");
    CHECK(kernel(tm).size() == 2);
    CHECK(oracle::kernel_size([](std::uint64_t n) { return oracle::thue_morse(n); }, 2, 6) == 2);
    auto z = graph_of("zeros.zs");
    CHECK(kernel(z).size() == 1);
    oracle::Rng rng(47);
    for (int trial = 0; trial < 30; ++trial) {
      auto s = oracle::random_flat_spec(rng, oracle::uniform(rng, 1, 5), 2, 1);
      auto g = build_ngraph(s);
      CHECK(kernel(g).size() ==
            oracle::kernel_size([&](std::uint64_t n) { return oracle::graph_at(g, g.root, n); }, 2, 10, 256));
    }
  }
}
