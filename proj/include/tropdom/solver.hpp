#pragma once

// γ₂(P_m□C_n) from power diagonals, and closed formulas
//
//   γ₂(n) = ⌈b·n/a⌉ + α_(n mod a)    for n >= n0
//
// obtained from the difference equation γ₂(n+a) − γ₂(n) = b.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tropdom/errors.hpp"
#include "tropdom/power_store.hpp"
#include "tropdom/recurrence.hpp"
#include "tropdom/tropical.hpp"

namespace tropdom {

struct gamma2_value {
  std::uint32_t m     = 0;
  std::size_t   n     = 0;
  std::uint64_t value = 0;

  friend bool operator==(const gamma2_value&, const gamma2_value&) = default;
};

struct closed_formula {
  std::uint32_t m  = 0;
  std::size_t   a  = 1;
  std::uint64_t b  = 0;
  std::size_t   n0 = 3;
  // alpha[k] for k = 0..a-1. Offsets may be negative in principle.
  std::vector<std::int64_t>               alpha;
  std::map<std::size_t, std::uint64_t>    exceptions;
  std::vector<gamma2_value>               boundary;

  friend bool operator==(const closed_formula&, const closed_formula&) =
      default;
};

// ⌈b·n/a⌉ in exact integer arithmetic.
constexpr std::uint64_t ceil_div(std::uint64_t num, std::uint64_t den) {
  return (num + den - 1) / den;
}

template <std::unsigned_integral Raw>
tropical<Raw> diagonal_min(const basic_matrix<Raw>& a) {
  Raw best = tropical<Raw>::sentinel;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    best = std::min(best, a(i, i));
  }
  return {best};
}

inline void require_cycle_order(std::size_t n) {
  if (n < 3) {
    throw domain_error("cycle order n must be >= 3 (got " + std::to_string(n) +
                       ")");
  }
}

inline gamma2_value gamma2_exact(std::uint32_t m, std::size_t n,
                                 const power_store& powers) {
  require_cycle_order(n);
  if (!powers.contains(n)) {
    throw integrity_error("gamma2_exact: power " + std::to_string(n) +
                          " not stored");
  }
  auto const d = diagonal_min(*powers.power(n));
  if (d.is_infinite()) {
    throw integrity_error("gamma2_exact: diagonal of A^" + std::to_string(n) +
                          " is all infinite");
  }
  return {m, n, d.raw};
}

// γ₂ for n = 3 .. n0+a-1.
inline std::vector<gamma2_value> boundary_values(const power_store& powers,
                                                 std::size_t n0,
                                                 std::size_t a) {
  std::size_t const last = n0 + a - 1;
  if (last > powers.max_exponent()) {
    throw integrity_error("boundary_values: need powers through " +
                          std::to_string(last) + ", have " +
                          std::to_string(powers.max_exponent()));
  }
  std::vector<gamma2_value> out;
  for (std::size_t n = 3; n <= last; ++n) {
    out.push_back(gamma2_exact(powers.m(), n, powers));
  }
  return out;
}

namespace detail {

inline std::int64_t formula_base(const closed_formula& f, std::size_t n) {
  return static_cast<std::int64_t>(ceil_div(f.b * n, f.a)) +
         f.alpha[n % f.a];
}

}  // namespace detail

// α_k comes from the window [n0, n0+a-1] only; smaller n that disagree with
// the extended formula are stored as explicit exceptions.
inline closed_formula build_formula(std::uint32_t                    m,
                                    const recurrence_certificate&    cert,
                                    const std::vector<gamma2_value>& boundary) {
  if (cert.a < 1 || cert.n0 < 1) {
    throw integrity_error("build_formula: degenerate certificate");
  }
  std::map<std::size_t, std::uint64_t> by_n;
  for (auto const& g : boundary) {
    by_n[g.n] = g.value;
  }
  std::size_t const first = std::max<std::size_t>(3, cert.n0);
  for (std::size_t n = 3; n < cert.n0 + cert.a; ++n) {
    if (!by_n.contains(n)) {
      throw integrity_error("build_formula: boundary value for n=" +
                            std::to_string(n) + " missing");
    }
  }

  closed_formula f;
  f.m        = m;
  f.a        = cert.a;
  f.b        = cert.b;
  f.n0       = cert.n0;
  f.boundary = boundary;
  f.alpha.assign(cert.a, 0);
  // When n0 < 3 the window is shifted up by whole periods; the difference
  // equation makes the residues agree either way.
  for (std::size_t n = first; n < first + cert.a; ++n) {
    std::uint64_t v;
    if (auto it = by_n.find(n); it != by_n.end()) {
      v = it->second;
    } else {
      throw integrity_error("build_formula: boundary value for n=" +
                            std::to_string(n) + " missing");
    }
    f.alpha[n % cert.a] = static_cast<std::int64_t>(v) -
                          static_cast<std::int64_t>(ceil_div(cert.b * n,
                                                             cert.a));
  }
  for (std::size_t n = 3; n < cert.n0; ++n) {
    auto const v = static_cast<std::int64_t>(by_n.at(n));
    if (v != detail::formula_base(f, n)) {
      f.exceptions[n] = by_n.at(n);
    }
  }
  return f;
}

inline std::uint64_t evaluate_formula(const closed_formula& f, std::size_t n) {
  require_cycle_order(n);
  if (auto it = f.exceptions.find(n); it != f.exceptions.end()) {
    return it->second;
  }
  auto const v = detail::formula_base(f, n);
  if (v < 1) {
    throw integrity_error("evaluate_formula: non-positive value at n=" +
                          std::to_string(n));
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace tropdom
