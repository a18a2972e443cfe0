#include <doctest.h>

#include "../support/oracles.hpp"
#include "zipstream/analysis.hpp"
#include "zipstream/semantics.hpp"

using namespace zs;

namespace {
std::vector<std::string> productive_fixtures() { return {"morse.zs", "morse2.zs", "alt.zs", "mix.zs", "zeros.zs"}; }
}  // namespace

TEST_SUITE("semantics") {
  TEST_CASE("Thue-Morse prefix") {
    auto s = load_spec(oracle::fixture("morse.zs"));
    CHECK(oracle::join(eval_prefix(s, 16)) == "0110100110010110");
    auto p = eval_prefix(s, 512);
    for (std::size_t n = 0; n < p.size(); ++n) CHECK(p[n] == oracle::thue_morse(n));
  }

  TEST_CASE("expand_head") {
    auto tm = load_spec(oracle::fixture("morse.zs"));
    auto [a, rest] = expand_head(mk_var("M"), tm);
    CHECK(a == "0");
    CHECK(rest == mk_var("X"));
    auto alt = load_spec(oracle::fixture("alt.zs"));
    auto [b, r2] = expand_head(mk_zip({mk_var("zeros"), mk_var("ones")}), alt);
    CHECK(b == "0");
    CHECK(r2 == mk_zip({mk_var("ones"), mk_var("zeros")}));
    CHECK_THROWS_AS(expand_head(mk_var("Y"), load_spec(oracle::fixture("unprod.zs"))), BudgetExhausted);
  }

  TEST_CASE("small fixtures") {
    CHECK(oracle::join(eval_prefix(load_spec(oracle::fixture("zeros.zs")), 4)) == "0000");
    CHECK(oracle::join(eval_prefix(load_spec(oracle::fixture("mix.zs")), 29)) == "abbabbaabbbaaaabbbbbbaaaababa");
    CHECK_THROWS_AS(eval_prefix(load_spec(oracle::fixture("loop.zs")), 1), BudgetExhausted);
    CHECK_THROWS_AS(eval_prefix(load_spec(oracle::fixture("morse.zs")), 1000, RewriteBudget{50}), BudgetExhausted);
  }

  TEST_CASE("eval_prefix agrees with the window oracle on fixtures") {
    for (const auto& f : productive_fixtures()) {
      auto s = load_spec(oracle::fixture(f));
      oracle::NaiveStreams o(s, 128);
      auto p = eval_prefix(s, 128);
      for (std::size_t n = 0; n < 128; ++n) {
        REQUIRE_MESSAGE(o.root(n).has_value(), f);
        CHECK_MESSAGE(p[n] == *o.root(n), f << " at " << n);
      }
    }
  }

  TEST_CASE("prefix monotonicity") {
    for (const auto& f : productive_fixtures()) {
      auto s = load_spec(oracle::fixture(f));
      auto longer = eval_prefix(s, 65);
      for (std::size_t n = 1; n <= 64; ++n) {
        auto p = eval_prefix(s, n);
        CHECK(std::equal(p.begin(), p.end(), longer.begin()));
      }
    }
  }

  TEST_CASE("project_prefix") {
    auto tm = load_spec(oracle::fixture("morse.zs"));
    CHECK(oracle::join(project_prefix(tm, 0, 2, 8)) == "01101001");
    CHECK(project_prefix(tm, 0, 1, 20) == eval_prefix(tm, 20));
    CHECK(oracle::join(project_prefix(load_spec(oracle::fixture("alt.zs")), 1, 2, 4)) == "1111");
    oracle::Rng rng(11);
    for (int t = 0; t < 60; ++t) {
      std::uint64_t k = oracle::uniform(rng, 1, 5), i = oracle::uniform(rng, 0, 7), n = oracle::uniform(rng, 1, 20);
      for (const auto& f : productive_fixtures()) {
        auto s = load_spec(oracle::fixture(f));
        auto p = project_prefix(s, i, k, n);
        auto full = eval_prefix(s, (n - 1) * k + i + 1);
        for (std::uint64_t j = 0; j < n; ++j) CHECK(p[j] == full[k * j + i]);
      }
    }
  }

  TEST_CASE("projections inside specifications") {
    // Odd positions of Thue-Morse are the complement of Thue-Morse.
    auto s = parse_spec("root E\nE = proj(1, 2, M)\nM = 0:X\nX = 1:zip(X, Y)\nY = 0:zip(Y, X)");
    auto p = eval_prefix(s, 64);
    StreamIndexer ix(s);
    for (std::size_t n = 0; n < 64; ++n) {
      CHECK(p[n] == oracle::thue_morse(2 * n + 1));
      CHECK(ix.at(n) == p[n]);
    }
    // Index beyond the modulus.
    auto t = parse_spec("root E\nE = proj(5, 2, M)\nM = 0:X\nX = 1:zip(X, Y)\nY = 0:zip(Y, X)");
    auto q = eval_prefix(t, 32);
    for (std::size_t n = 0; n < 32; ++n) CHECK(q[n] == oracle::thue_morse(2 * n + 5));
  }

  TEST_CASE("StreamIndexer and Evaluator agree with the window oracle on random specifications") {
    oracle::Rng rng(3);
    int compared = 0;
    for (int trial = 0; trial < 400; ++trial) {
      auto s = oracle::random_spec(rng, oracle::uniform(rng, 1, 4), true);
      Prefix p;
      try {
        p = eval_prefix(s, 24, RewriteBudget{200000});
      } catch (const BudgetExhausted&) {
        continue;
      }
      ++compared;
      oracle::NaiveStreams o(s, 24 * 40);
      StreamIndexer ix(s, RewriteBudget{2000000});
      for (std::size_t n = 0; n < p.size(); ++n) {
        CHECK(ix.at(n) == p[n]);
        if (o.root(n)) CHECK(*o.root(n) == p[n]);
      }
    }
    CHECK(compared > 50);
  }

  TEST_CASE("project_through_zip") {
    auto sig0 = mk_var("S0"), sig1 = mk_var("S1");
    CHECK(project_through_zip(0, 1, 2, {sig0, sig1}) == mk_zip({mk_proj(0, 1, sig0), mk_proj(0, 1, sig1)}));
    CHECK(project_through_zip(2, 3, 2, {sig0, sig1}) == mk_zip({mk_proj(1, 3, sig0), mk_proj(2, 3, sig1)}));
    CHECK(project_through_zip(1, 2, 2, {sig0, sig1}) == mk_zip({mk_proj(0, 2, sig1), mk_proj(1, 2, sig1)}));
    // Pointwise against direct projection: sigma0 = TM, sigma1 = alt.
    auto base = std::string("M = 0:X\nX = 1:zip(X, Y)\nY = 0:zip(Y, X)\nA = zip(Z, O)\nZ = 0:Z\nO = 1:O\n");
    oracle::Rng rng(5);
    for (int t = 0; t < 40; ++t) {
      std::uint64_t i = oracle::uniform(rng, 0, 6), n = oracle::uniform(rng, 1, 4), k = oracle::uniform(rng, 1, 3);
      std::vector<Term> args;
      for (std::uint64_t j = 0; j < k; ++j) args.push_back(mk_var(j % 2 ? "A" : "M"));
      Term direct = mk_proj(i, n, mk_zip(args));
      Term through = project_through_zip(i, n, k, args);
      auto s = parse_spec(base);
      s.add("P", direct);
      s.add("Q", through);
      s.refresh();
      StreamIndexer ix(s);
      for (std::uint64_t m = 0; m < 100; ++m) CHECK(ix.at(mk_var("P"), m) == ix.at(mk_var("Q"), m));
    }
  }

  TEST_CASE("graph readiness") {
    CHECK(is_graph_ready(load_spec(oracle::fixture("morse.zs"))));
    CHECK(is_graph_ready(load_spec(oracle::fixture("morse2.zs"))));
    std::string why;
    CHECK_FALSE(is_graph_ready(load_spec(oracle::fixture("alt.zs")), &why));
    CHECK_FALSE(why.empty());
    CHECK_FALSE(is_graph_ready(parse_spec("A = 0:proj(0, 2, A)")));
  }

  TEST_CASE("normal forms") {
    auto tm = load_spec(oracle::fixture("morse.zs"));
    Normalizer nz(tm);
    CHECK(nz.proj(1, 2, mk_var("M")) == mk_cons("1", mk_var("Y")));
    CHECK(nz.proj(0, 2, mk_var("M")) == mk_cons("0", mk_var("X")));
    CHECK(nz.head(mk_var("M")) == "0");
    CHECK(nz.head(mk_zip({mk_var("Y"), mk_var("X")})) == "0");
    CHECK(nz.arity(mk_var("M")) == 2);
    // Idempotence and agreement with stepwise projection.
    Term t = normalize(mk_proj(1, 2, mk_proj(0, 2, mk_var("M"))), tm);
    CHECK(normalize(t, tm) == t);
    CHECK(t == nz.proj(1, 2, nz.proj(0, 2, mk_var("M"))));
    CHECK(normalize_head(mk_proj(1, 2, mk_var("M")), tm) == "1");
  }
}
