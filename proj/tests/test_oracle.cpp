#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tropdom/oracle.hpp"

using namespace tropdom;
using namespace tropdom::oracle;

TEST_CASE("cylinder construction", "[oracle]") {
  auto const prism = build_cylinder(2, 3);
  CHECK(prism.order() == 6);
  for (std::size_t v = 0; v < prism.order(); ++v) {
    CHECK(prism.degree(v) == 3);
  }

  CHECK(build_cylinder(4, 5).order() == 20);

  auto const g = build_cylinder(3, 4);
  CHECK(g.order() == 12);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(g.degree(g.id({0, j})) == 3);
    CHECK(g.degree(g.id({1, j})) == 4);
    CHECK(g.degree(g.id({2, j})) == 3);
  }
  // Columns wrap around.
  auto const& nb = g.neighbors(g.id({1, 0}));
  CHECK(std::find(nb.begin(), nb.end(), g.id({1, 3})) != nb.end());

  CHECK_THROWS_AS(build_cylinder(1, 5), domain_error);
  CHECK_THROWS_AS(build_cylinder(3, 2), domain_error);
  CHECK_THROWS_AS(g.id({3, 0}), domain_error);
}

TEST_CASE("is_2_dominating", "[oracle]") {
  auto const          g = build_cylinder(2, 3);
  std::vector<vertex> all;
  for (std::size_t v = 0; v < g.order(); ++v) {
    all.push_back(g.at(v));
  }
  CHECK(is_2_dominating(g, all));
  CHECK_FALSE(is_2_dominating(g, {}));
  CHECK(is_2_dominating(g, {{0, 0}, {0, 1}, {1, 2}}));
  CHECK_FALSE(is_2_dominating(g, {{0, 0}, {0, 1}}));
  CHECK_THROWS_AS(is_2_dominating(g, {{2, 0}}), domain_error);
}

TEST_CASE("gamma2_bruteforce small values", "[oracle]") {
  CHECK(gamma2_bruteforce(2, 3).value == 3);
  CHECK(gamma2_bruteforce(2, 4).value == 4);
  auto const r = gamma2_bruteforce(4, 5);
  CHECK(r.value == 10);
  CHECK(r.witness.size() == 10);
}

TEST_CASE("witness is 2-dominating and optimal on random samples",
          "[oracle][property]") {
  std::mt19937_64 rng(17);
  for (auto [m, n] : {std::pair{2, 5}, {3, 5}, {4, 4}, {3, 6}, {5, 4}}) {
    auto const g = build_cylinder(m, n);
    auto const r = gamma2_bruteforce(g);
    INFO("m=" << m << " n=" << n);
    REQUIRE(is_2_dominating(g, r.witness));
    REQUIRE(r.witness.size() == r.value);

    std::vector<std::size_t> ids(g.order());
    std::iota(ids.begin(), ids.end(), 0);
    for (int s = 0; s < 1000; ++s) {
      std::shuffle(ids.begin(), ids.end(), rng);
      std::vector<vertex> smaller;
      for (std::size_t i = 0; i + 1 < r.value; ++i) {
        smaller.push_back(g.at(ids[i]));
      }
      REQUIRE_FALSE(is_2_dominating(g, smaller));
    }
  }
}

TEST_CASE("worker count changes neither value nor witness", "[oracle]") {
  auto const g   = build_cylinder(3, 6);
  auto const one = gamma2_bruteforce(g, {20, 1});
  for (unsigned w : {2u, 4u, 7u}) {
    auto const r = gamma2_bruteforce(g, {20, w});
    CHECK(r.value == one.value);
    CHECK(r.witness == one.witness);
  }
}

TEST_CASE("oracle refuses instances over budget", "[oracle]") {
  CHECK_THROWS_AS(gamma2_bruteforce(3, 7), resource_error);
  CHECK_NOTHROW(gamma2_bruteforce(build_cylinder(3, 7), {21, 1}));
}
