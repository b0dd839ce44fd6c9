#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "tropdom/recurrence.hpp"
#include "tropdom/reference_values.hpp"
#include "tropdom/words.hpp"

using namespace tropdom;

namespace {

const power_store& powers_for(std::uint32_t m) {
  static std::map<std::uint32_t, power_store> cache;
  auto it = cache.find(m);
  if (it == cache.end()) {
    it = cache
             .emplace(m, power_sequence(build_transfer_matrix(m), 50, {}, {},
                                        m))
             .first;
  }
  return it->second;
}

}  // namespace

TEST_CASE("find_recurrence reproduces the descending-search hits",
          "[recurrence]") {
  for (std::uint32_t m : {2u, 5u, 7u}) {
    auto const ref  = *reference::recurrence(m);
    auto const cert = find_recurrence(powers_for(m), 50);
    REQUIRE(cert);
    INFO("m=" << m);
    CHECK(cert->r0 == ref.r0);
    CHECK(cert->a == ref.a);
    CHECK(cert->b == ref.b);
    CHECK(cert->r0 + cert->a == 50);
  }
}

TEST_CASE("minimize_n0", "[recurrence]") {
  for (std::uint32_t m : {2u, 5u, 6u}) {
    auto const& p    = powers_for(m);
    auto        cert = *find_recurrence(p, 50);
    INFO("m=" << m);
    CHECK(minimize_n0(p, cert) == reference::recurrence(m)->n0);
  }
}

TEST_CASE("minimize_n0 rejects a certificate that does not hold",
          "[recurrence]") {
  auto const& p    = powers_for(2);
  auto        cert = *find_recurrence(p, 50);
  cert.b += 1;
  CHECK_THROWS_AS(minimize_n0(p, cert), integrity_error);
}

TEST_CASE("verify_recurrence", "[recurrence]") {
  auto const& p    = powers_for(2);
  auto        cert = *find_recurrence(p, 50);
  cert.n0          = minimize_n0(p, cert);
  REQUIRE(cert.n0 == 4);
  CHECK(verify_recurrence(p, cert));

  auto perturbed = cert;
  perturbed.b += 1;
  CHECK_FALSE(verify_recurrence(p, perturbed));

  auto early = cert;
  early.n0 -= 1;
  CHECK_FALSE(verify_recurrence(p, early));
}

TEST_CASE("n0 never exceeds r0 and the relation propagates",
          "[recurrence][property]") {
  for (std::uint32_t m = 2; m <= 6; ++m) {
    auto const& p    = powers_for(m);
    auto        cert = *find_recurrence(p, 50);
    cert.n0          = minimize_n0(p, cert);
    INFO("m=" << m);
    CHECK(cert.n0 <= cert.r0);
    CHECK(verify_recurrence(p, cert));
  }
}

TEST_CASE("no recurrence when only sparse powers exist", "[recurrence]") {
  auto const p = power_sequence(build_transfer_matrix(4), 2, {}, {}, 4);
  CHECK_FALSE(find_recurrence(p, 2));
  CHECK_THROWS_AS(find_recurrence(p, 3), integrity_error);
}

TEST_CASE("a scaled cycle has a period-1 recurrence", "[recurrence]") {
  // Single vertex with a self-loop of weight 3: A^n = [3n].
  tropical_matrix const a{{3}};
  auto const            p    = power_sequence(a, 10, {});
  auto const            cert = find_recurrence(p, 10);
  REQUIRE(cert);
  CHECK(cert->a == 1);
  CHECK(cert->b == 3);
  CHECK(cert->r0 == 9);
  CHECK(minimize_n0(p, *cert) == 1);
}

TEST_CASE("smallest_period diagnostic", "[recurrence]") {
  auto const& p    = powers_for(3);
  auto        cert = *find_recurrence(p, 50);
  cert.n0          = minimize_n0(p, cert);
  auto const sp    = smallest_period(p, cert);
  REQUIRE(sp);
  CHECK(sp->first <= cert.a);
}
