#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "tropdom/oracle.hpp"
#include "tropdom/recurrence.hpp"
#include "tropdom/reference_values.hpp"
#include "tropdom/solver.hpp"
#include "tropdom/words.hpp"

using namespace tropdom;

namespace {

constexpr std::uint16_t inf = tropical16::sentinel;

struct solved {
  power_store            powers;
  recurrence_certificate cert;
  closed_formula         formula;
};

const solved& solve(std::uint32_t m) {
  static std::map<std::uint32_t, solved> cache;
  if (auto it = cache.find(m); it != cache.end()) {
    return it->second;
  }
  solved s;
  s.powers  = power_sequence(build_transfer_matrix(m), 50, {}, {}, m);
  s.cert    = *find_recurrence(s.powers, 50);
  s.cert.n0 = minimize_n0(s.powers, s.cert);
  s.formula = build_formula(m, s.cert,
                            boundary_values(s.powers, s.cert.n0, s.cert.a));
  return cache.emplace(m, std::move(s)).first->second;
}

}  // namespace

TEST_CASE("diagonal_min", "[solver]") {
  CHECK(diagonal_min(tropical_matrix{{4, inf}, {1, 7}}).raw == 4);
  CHECK(diagonal_min(tropical_matrix::identity(5)).raw == 0);
  CHECK(diagonal_min(tropical_matrix(3)).is_infinite());
}

TEST_CASE("gamma2_exact on small prisms agrees with exhaustive search",
          "[solver]") {
  auto const p = power_sequence(build_transfer_matrix(2), 4, {}, {}, 2);
  CHECK(gamma2_exact(2, 3, p).value == oracle::gamma2_bruteforce(2, 3).value);
  CHECK(gamma2_exact(2, 3, p).value == 3);
  CHECK(gamma2_exact(2, 4, p).value == 4);
  CHECK_THROWS_AS(gamma2_exact(2, 2, p), domain_error);
  CHECK_THROWS_AS(gamma2_exact(2, 5, p), integrity_error);
}

TEST_CASE("gamma2 of P_4 x C_5 is 10", "[solver]") {
  auto const p = power_sequence(build_transfer_matrix(4), 5, {}, {}, 4);
  CHECK(gamma2_exact(4, 5, p).value == 10);
}

TEST_CASE("boundary_values for m=2", "[solver]") {
  auto const& s  = solve(2);
  auto const  bv = boundary_values(s.powers, 4, 2);
  REQUIRE(bv.size() == 3);
  CHECK(bv[0] == gamma2_value{2, 3, 3});
  CHECK(bv[1] == gamma2_value{2, 4, 4});
  CHECK(bv[2] == gamma2_value{2, 5, 5});
  CHECK_THROWS_AS(boundary_values(s.powers, 50, 2), integrity_error);
}

TEST_CASE("alpha tables for m = 2..6", "[solver]") {
  for (std::uint32_t m = 2; m <= 6; ++m) {
    auto const& f    = solve(m).formula;
    auto const  ones = *reference::alpha(m);
    INFO("m=" << m);
    REQUIRE(f.a == reference::recurrence(m)->a);
    for (std::size_t k = 0; k < f.a; ++k) {
      bool const one = std::find(ones.begin(), ones.end(), k) != ones.end();
      CHECK(f.alpha[k] == (one ? 1 : 0));
    }
  }
  CHECK(solve(3).formula.a == 6);
  CHECK(solve(3).formula.b == 8);
}

TEST_CASE("evaluate_formula", "[solver]") {
  CHECK(evaluate_formula(solve(3).formula, 9) == 12);
  CHECK(evaluate_formula(solve(2).formula, 100) == 100);
  CHECK_THROWS_AS(evaluate_formula(solve(2).formula, 2), domain_error);
}

TEST_CASE("formula matches the diagonal on [3, 50] for m <= 6", "[solver]") {
  for (std::uint32_t m = 2; m <= 6; ++m) {
    auto const& s = solve(m);
    for (std::size_t n = 3; n <= 50; ++n) {
      INFO("m=" << m << " n=" << n);
      REQUIRE(evaluate_formula(s.formula, n) ==
              gamma2_exact(m, n, s.powers).value);
    }
  }
}

TEST_CASE("alpha is fixed by the boundary window only", "[solver]") {
  auto const& s = solve(4);
  auto        f = build_formula(4, s.cert, s.formula.boundary);
  for (std::size_t n = s.cert.n0; n < s.cert.n0 + s.cert.a; ++n) {
    auto const v = s.formula.boundary[n - 3].value;
    CHECK(static_cast<std::int64_t>(v) ==
          static_cast<std::int64_t>(ceil_div(s.cert.b * n, s.cert.a)) +
              f.alpha[n % f.a]);
  }
  // Perturbing a small-n value only adds an exception.
  auto boundary = s.formula.boundary;
  boundary[0].value += 5;
  auto const g = build_formula(4, s.cert, boundary);
  CHECK(g.alpha == f.alpha);
  CHECK(g.exceptions.at(3) == boundary[0].value);
}

TEST_CASE("build_formula requires the full boundary", "[solver]") {
  auto const& s        = solve(2);
  auto        boundary = s.formula.boundary;
  boundary.pop_back();
  CHECK_THROWS_AS(build_formula(2, s.cert, boundary), integrity_error);
}

TEST_CASE("exact ceiling identity", "[solver][property]") {
  for (std::uint64_t a = 1; a <= 20; ++a) {
    for (std::uint64_t b = 0; b <= 60; ++b) {
      for (std::uint64_t n = 0; n <= 200; ++n) {
        REQUIRE(ceil_div(b * (n + a), a) == ceil_div(b * n, a) + b);
      }
    }
  }
  CHECK(ceil_div(50, 3) == 17);
  CHECK(ceil_div(48, 3) == 16);
}

TEST_CASE("gamma2 stays within [1, m*n]", "[solver][property]") {
  for (std::uint32_t m = 2; m <= 6; ++m) {
    auto const& s = solve(m);
    for (std::size_t n = 3; n <= 50; ++n) {
      auto const g = gamma2_exact(m, n, s.powers).value;
      REQUIRE(g >= 1);
      REQUIRE(g <= m * n);
    }
  }
}

TEST_CASE("m=8 at n=9 follows (m+2)n/3", "[solver][slow]") {
  auto const a = build_transfer_matrix(8);
  auto const p = power_sequence(a, 9, {}, {}, 8);
  CHECK(gamma2_exact(8, 9, p).value == 30);
}
