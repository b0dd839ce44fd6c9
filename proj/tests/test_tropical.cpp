#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tropdom/tropical.hpp"

using namespace tropdom;

namespace {

constexpr std::uint16_t inf = tropical16::sentinel;

tropical_matrix random_matrix(std::mt19937_64& rng, std::size_t dim,
                              unsigned max_value, double inf_share = 0.0) {
  std::uniform_int_distribution<unsigned> value(0, max_value);
  std::bernoulli_distribution             infinite(inf_share);
  tropical_matrix                         a(dim);
  for (auto& v : a.entries()) {
    v = infinite(rng) ? inf : static_cast<std::uint16_t>(value(rng));
  }
  return a;
}

}  // namespace

TEST_CASE("tropical scalars saturate at the sentinel", "[tropical]") {
  auto const x = tropical16{7};
  CHECK((tropical16::infinity() + x).is_infinite());
  CHECK((x + tropical16::infinity()).is_infinite());
  CHECK(min(tropical16::infinity(), x) == x);
  CHECK((tropical16{65000} + tropical16{1000}).is_infinite());
  CHECK((x + tropical16{3}).raw == 10);
  CHECK(tropical<std::uint32_t>::add(4000000000u, 400000000u) ==
        tropical<std::uint32_t>::sentinel);
}

TEST_CASE("minplus_product worked example", "[tropical]") {
  tropical_matrix const a{{0, 1}, {inf, 2}};
  tropical_matrix const b{{3, inf}, {0, 5}};
  tropical_matrix const expected{{1, 6}, {2, 7}};
  CHECK(minplus_product(a, b) == expected);
  CHECK(minplus_product_naive(a, b) == expected);
}

TEST_CASE("identity is neutral and infinite rows absorb", "[tropical]") {
  std::mt19937_64 rng(11);
  auto const      a  = random_matrix(rng, 37, 50, 0.2);
  auto const      id = tropical_matrix::identity(37);
  CHECK(minplus_product(id, a) == a);
  CHECK(minplus_product(a, id) == a);

  auto with_inf_row = a;
  for (auto& v : with_inf_row.row(5)) {
    v = inf;
  }
  auto const c = minplus_product(with_inf_row, random_matrix(rng, 37, 50));
  for (auto v : c.row(5)) {
    CHECK(v == inf);
  }
}

TEST_CASE("minplus_product rejects mismatched dimensions", "[tropical]") {
  CHECK_THROWS_AS(minplus_product(tropical_matrix(3), tropical_matrix(4)),
                  domain_error);
  CHECK_THROWS_AS(minplus_product(tropical_matrix(3), tropical_matrix(3),
                                  {0, 64}),
                  domain_error);
}

TEST_CASE("blocked kernel equals the naive reference", "[tropical]") {
  std::mt19937_64                            rng(2024);
  std::uniform_int_distribution<std::size_t> dim(1, 256);
  for (int trial = 0; trial < 20; ++trial) {
    auto const n = dim(rng);
    auto const a = random_matrix(rng, n, 200, 0.1);
    auto const b = random_matrix(rng, n, 200, 0.1);
    auto const expected = minplus_product_naive(a, b);
    INFO("dim=" << n);
    for (std::size_t tile : {32u, 64u, 100u, 256u, 512u}) {
      CHECK(minplus_product(a, b, {1, tile}) == expected);
    }
  }
}

TEST_CASE("kernel saturates instead of wrapping", "[tropical]") {
  tropical_matrix const a{{60000, 1}, {2, 3}};
  tropical_matrix const b{{60000, 60000}, {60000, 60000}};
  auto const            c = minplus_product(a, b);
  CHECK(c(0, 0) == 60001);
  CHECK(minplus_product(b, b) == tropical_matrix(2, inf));
  CHECK(minplus_product(b, b) == minplus_product_naive(b, b));
}

TEST_CASE("result is independent of the worker count", "[tropical]") {
  std::mt19937_64 rng(5);
  auto const      a   = random_matrix(rng, 301, 30, 0.05);
  auto const      b   = random_matrix(rng, 301, 30, 0.05);
  auto const      one = minplus_product(a, b, {1});
  for (unsigned w : {2u, 4u, 8u}) {
    CHECK(minplus_product(a, b, {w}) == one);
  }
}

TEST_CASE("(min,+) product is associative", "[tropical][property]") {
  std::mt19937_64                            rng(99);
  std::uniform_int_distribution<std::size_t> dim(1, 16);
  for (int trial = 0; trial < 100; ++trial) {
    auto const n = dim(rng);
    auto const a = random_matrix(rng, n, 100, 0.1);
    auto const b = random_matrix(rng, n, 100, 0.1);
    auto const c = random_matrix(rng, n, 100, 0.1);
    REQUIRE(minplus_product(minplus_product(a, b), c) ==
            minplus_product(a, minplus_product(b, c)));
  }
}

TEST_CASE("scalar_combine", "[tropical]") {
  tropical_matrix const a{{0, inf}, {1, 2}};
  CHECK(scalar_combine(0, a) == a);
  CHECK(scalar_combine(3, a) == tropical_matrix{{3, inf}, {4, 5}});
  CHECK(scalar_combine(2, scalar_combine(5, a)) == scalar_combine(7, a));
  CHECK_THROWS_AS(scalar_combine(inf, a), domain_error);
}

TEST_CASE("constant_difference", "[tropical]") {
  tropical_matrix const hi{{5, 6}, {7, 8}};
  tropical_matrix const lo{{3, 4}, {5, 6}};
  tropical_matrix const off{{5, 6}, {7, 9}};
  CHECK(constant_difference(hi, hi) == 0u);
  CHECK(constant_difference(hi, lo) == 2u);
  CHECK_FALSE(constant_difference(off, lo));
  // Negative shifts are not constants in the natural semiring.
  CHECK_FALSE(constant_difference(lo, hi));
  CHECK_THROWS_AS(constant_difference(hi, tropical_matrix(3)), domain_error);
}

TEST_CASE("constant_difference modes around infinity", "[tropical]") {
  tropical_matrix const a{{5, inf}, {7, 8}};
  tropical_matrix const b{{3, inf}, {5, 6}};
  tropical_matrix const c{{3, 4}, {5, 6}};
  CHECK_FALSE(constant_difference(a, b));
  difference_options lenient{difference_mode::lenient, 1};
  CHECK(constant_difference(a, b, lenient) == 2u);
  CHECK_FALSE(constant_difference(a, c, lenient));
  CHECK_FALSE(constant_difference(tropical_matrix(2), tropical_matrix(2),
                                  lenient));
}

TEST_CASE("constant_difference agrees across workers", "[tropical]") {
  std::mt19937_64 rng(3);
  auto const      a = random_matrix(rng, 200, 1000);
  auto const      b = scalar_combine(17, a);
  auto            c = b;
  c(199, 199) += 1;
  for (unsigned w : {1u, 3u, 8u}) {
    difference_options opts{difference_mode::strict, w};
    CHECK(constant_difference(b, a, opts) == 17u);
    CHECK_FALSE(constant_difference(c, a, opts));
  }
}

TEST_CASE("32-bit matrices share the kernel", "[tropical]") {
  std::mt19937_64 rng(8);
  auto const      a = random_matrix(rng, 40, 100, 0.1);
  auto const      b = random_matrix(rng, 40, 100, 0.1);
  auto const      wide = minplus_product(widen<std::uint32_t>(a),
                                         widen<std::uint32_t>(b));
  CHECK(wide == widen<std::uint32_t>(minplus_product(a, b)));
}
