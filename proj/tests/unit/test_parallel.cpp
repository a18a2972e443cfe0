#include <doctest.h>

#include "../support/oracles.hpp"
#include "zipstream/parallel.hpp"

using namespace zs;

TEST_SUITE("parallel") {
  TEST_CASE("parallel kernels match their serial references") {
    oracle::Rng rng(89);
    std::vector<ObsGraph> gs;
    for (int i = 0; i < 12; ++i) gs.push_back(build_ngraph(oracle::random_flat_spec(rng, oracle::uniform(rng, 1, 4), 2, 1)));
    for (const auto& g : gs) CHECK(interpret_range(g, 1000, 3000) == interpret_range_serial(g, 1000, 3000));
    CHECK(bisimilarity_matrix(gs) == bisimilarity_matrix_serial(gs));
    for (int i = 0; i < 8; ++i) {
      auto a = oracle::random_dfao(rng, 8, 4);
      CHECK(generate_range(a, 0, 5000) == generate_range_serial(a, 0, 5000));
    }
    auto f = oracle::random_decreasing_fractran(rng);
    auto par = fractran_outputs(f, 1, 500, 10000), ser = fractran_outputs_serial(f, 1, 500, 10000);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
      CHECK(par[i].out == ser[i].out);
      CHECK(par[i].steps == ser[i].steps);
    }
  }

  TEST_CASE("bisimilarity matrix is an equivalence") {
    oracle::Rng rng(97);
    std::vector<ObsGraph> gs;
    for (int i = 0; i < 10; ++i) gs.push_back(build_ngraph(oracle::random_flat_spec(rng, oracle::uniform(rng, 1, 2), 2, 1)));
    auto m = bisimilarity_matrix(gs);
    for (std::size_t i = 0; i < gs.size(); ++i) {
      CHECK(m[i][i]);
      for (std::size_t j = 0; j < gs.size(); ++j) {
        CHECK(m[i][j] == m[j][i]);
        for (std::size_t l = 0; l < gs.size(); ++l)
          if (m[i][j] && m[j][l]) CHECK(m[i][l]);
      }
    }
  }
}
