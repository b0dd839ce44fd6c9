#pragma once

// Additive recurrences between tropical powers.
//
// If A^(n0+a) = b ⊠ A^n0 then A^(n+a) = b ⊠ A^n for every n >= n0, since
// A ⊠ (b ⊠ M) = b ⊠ (A ⊠ M). The routines below locate such a pair among
// stored powers, push its start down to the smallest exponent for which it
// holds, and re-check it over the whole stored range.

#include <cstdint>
#include <optional>
#include <string>

#include "tropdom/errors.hpp"
#include "tropdom/power_store.hpp"
#include "tropdom/tropical.hpp"

namespace tropdom {

struct recurrence_certificate {
  std::uint32_t m     = 0;
  // Start exponent reported by the search (r0), and its minimized value.
  std::size_t   r0    = 0;
  std::size_t   n0    = 0;
  std::size_t   a     = 0;
  std::uint64_t b     = 0;
  std::size_t   max_k = 0;

  friend bool operator==(const recurrence_certificate&,
                         const recurrence_certificate&) = default;
};

struct search_options {
  unsigned workers = 1;
};

// Scans i = K..1 and, for each, j = i-1..1; the first pair whose difference
// A^i - A^j is a constant matrix gives r0 = j, a = i - j, b = constant.
// Powers containing infinity never qualify.
inline std::optional<recurrence_certificate> find_recurrence(
    const power_store& powers, std::size_t k, search_options opts = {}) {
  if (k > powers.max_exponent()) {
    throw integrity_error("find_recurrence: K=" + std::to_string(k) +
                          " exceeds stored powers (" +
                          std::to_string(powers.max_exponent()) + ")");
  }
  difference_options const diff{difference_mode::strict, opts.workers};
  for (std::size_t i = k; i >= 1; --i) {
    auto const hi = powers.power(i);
    if (hi->has_infinite()) {
      continue;
    }
    for (std::size_t j = i - 1; j >= 1; --j) {
      auto const lo = powers.power(j);
      if (auto c = constant_difference(*hi, *lo, diff)) {
        recurrence_certificate cert;
        cert.m     = powers.m();
        cert.r0    = j;
        cert.n0    = j;
        cert.a     = i - j;
        cert.b     = *c;
        cert.max_k = k;
        return cert;
      }
    }
  }
  return std::nullopt;
}

namespace detail {

inline bool step_holds(const power_store& powers, std::size_t n,
                       std::size_t a, std::uint64_t b, unsigned workers) {
  if (n < 1 || !powers.contains(n + a)) {
    return false;
  }
  auto const c = constant_difference(*powers.power(n + a), *powers.power(n),
                                     {difference_mode::strict, workers});
  return c && *c == b;
}

}  // namespace detail

// Walks i = r0+a downward while A^i - A^(i-a) stays the constant b, and
// returns the last start exponent i-a for which it held.
inline std::size_t minimize_n0(const power_store&            powers,
                               const recurrence_certificate& cert,
                               search_options                opts = {}) {
  if (cert.a < 1 ||
      !detail::step_holds(powers, cert.r0, cert.a, cert.b, opts.workers)) {
    throw integrity_error(
        "minimize_n0: certificate (r0=" + std::to_string(cert.r0) +
        ", a=" + std::to_string(cert.a) + ", b=" + std::to_string(cert.b) +
        ") does not hold on the stored powers");
  }
  std::size_t n0 = cert.r0;
  while (n0 > 1 &&
         detail::step_holds(powers, n0 - 1, cert.a, cert.b, opts.workers)) {
    --n0;
  }
  return n0;
}

// A^(n+a) == b ⊠ A^n for every n in [n0, K-a], checked entry by entry.
inline bool verify_recurrence(const power_store&            powers,
                              const recurrence_certificate& cert,
                              search_options                opts = {}) {
  std::size_t const k = std::min(cert.max_k, powers.max_exponent());
  if (cert.a < 1 || cert.n0 < 1 || cert.n0 + cert.a > k) {
    return false;
  }
  if (cert.b >= tropical16::sentinel) {
    return false;
  }
  for (std::size_t n = cert.n0; n + cert.a <= k; ++n) {
    if (!detail::step_holds(powers, n, cert.a, cert.b, opts.workers)) {
      return false;
    }
  }
  return true;
}

// Diagnostic: the smallest period a' <= cert.a for which some constant b'
// satisfies A^(n0+a') = b' ⊠ A^n0 at the certificate's n0.
inline std::optional<std::pair<std::size_t, std::uint64_t>> smallest_period(
    const power_store& powers, const recurrence_certificate& cert) {
  for (std::size_t a = 1; a <= cert.a; ++a) {
    if (!powers.contains(cert.n0 + a)) {
      break;
    }
    if (auto c = constant_difference(*powers.power(cert.n0 + a),
                                     *powers.power(cert.n0))) {
      return std::pair{a, *c};
    }
  }
  return std::nullopt;
}

}  // namespace tropdom
