#include <doctest.h>

#include "../support/oracles.hpp"
#include "zipstream/analysis.hpp"
#include "zipstream/transform.hpp"

using namespace zs;

TEST_SUITE("transform") {
  TEST_CASE("ensure_free_root") {
    auto s = load_spec(oracle::fixture("zeros.zs"));
    auto t = ensure_free_root(s);
    CHECK(t.size() == s.size() + 1);
    CHECK(t.root != s.root);
    CHECK(t.rhs(t.root) == mk_var(s.root));
    auto m = load_spec(oracle::fixture("morse.zs"));
    CHECK(ensure_free_root(m) == m);
  }

  TEST_CASE("periodic_to_zipk") {
    for (std::uint64_t k = 2; k <= 4; ++k)
      for (auto u : {std::vector<Symbol>{"a"}, {"a", "b"}, {"a", "b", "c"}, {"0", "0", "1", "0", "1"}}) {
        auto s = periodic_to_zipk(u, k);
        CHECK(s.dialect == Dialect{DialectKind::ZipK, k});
        CHECK(is_productive(s));
        CHECK(is_graph_ready(s));
        auto p = eval_prefix(s, 60);
        for (std::size_t n = 0; n < p.size(); ++n) CHECK(p[n] == u[n % u.size()]);
      }
  }

  TEST_CASE("flatten fixtures") {
    for (auto f : {"morse.zs", "morse2.zs", "alt.zs", "mix.zs", "zeros.zs"}) {
      auto s = load_spec(oracle::fixture(f));
      auto t = flatten(s);
      CHECK_MESSAGE(is_flat(t), f);
      CHECK(is_productive(t));
      CHECK(eval_prefix(t, 200) == eval_prefix(s, 200));
      if (s.dialect.kind == DialectKind::ZipK) CHECK(t.dialect == s.dialect);
    }
    CHECK_THROWS_AS(flatten(load_spec(oracle::fixture("unprod.zs"))), NotProductive);
  }

  TEST_CASE("flatten preserves streams on random productive specifications") {
    oracle::Rng rng(29);
    int done = 0;
    for (int trial = 0; trial < 600 && done < 100; ++trial) {
      auto s = oracle::random_spec(rng, oracle::uniform(rng, 1, 4), false);
      if (!is_productive(s)) continue;
      auto t = flatten(s);
      CHECK_MESSAGE(is_flat(t), print_spec(s));
      CHECK_MESSAGE(eval_prefix(t, 64) == eval_prefix(s, 64), print_spec(s));
      for (auto a : zip_arities(t)) CHECK(a >= 2);
      ++done;
    }
    CHECK(done == 100);
  }

  TEST_CASE("unary zips and pruning") {
    auto s = parse_spec("A = zip(0:zip(B))\nB = 1:B\nC = C");
    auto u = eliminate_unary_zips(s);
    CHECK(print_term(u.rhs("A")) == "0:B");
    auto p = prune_unreachable(s);
    CHECK(p.size() == 2);
    CHECK_FALSE(p.has("C"));
  }

  TEST_CASE("is_flat and max_prefix") {
    CHECK(is_flat(load_spec(oracle::fixture("morse.zs"))) == false);
    CHECK(is_flat(parse_spec("X = 1:zip(X, Y)\nY = 0:0:zip(Y, X)")));
    CHECK(max_prefix(parse_spec("X = 1:zip(X, Y)\nY = 0:0:zip(Y, X)")) == 2);
  }
}
