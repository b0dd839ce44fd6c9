#pragma once

// Published values for 2 <= m <= 13, used as regression fixtures.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace tropdom::reference {

struct word_count_row {
  std::uint32_t m;
  std::size_t   words;
};

inline constexpr std::array<word_count_row, 12> word_counts = {{
    {2, 6},
    {3, 15},
    {4, 36},
    {5, 90},
    {6, 225},
    {7, 558},
    {8, 1386},
    {9, 3447},
    {10, 8568},
    {11, 21294},
    {12, 52929},
    {13, 131562},
}};

struct recurrence_row {
  std::uint32_t m;
  std::size_t   r0;  // first hit of the descending search with K = 50
  std::size_t   n0;  // minimized start
  std::size_t   a;
  std::uint64_t b;
};

inline constexpr std::array<recurrence_row, 11> recurrences = {{
    {2, 48, 4, 2, 2},
    {3, 44, 7, 6, 8},
    {4, 42, 9, 8, 14},
    {5, 43, 31, 7, 15},
    {6, 39, 19, 11, 28},
    {7, 32, 23, 18, 53},
    {8, 47, 25, 3, 10},
    {9, 47, 22, 3, 11},
    {10, 47, 21, 3, 12},
    {11, 47, 24, 3, 13},
    {12, 47, 26, 3, 14},
}};

// Residues k with α_k = 1; every other residue has α_k = 0.
struct alpha_row {
  std::uint32_t            m;
  std::vector<std::size_t> ones;
};

inline const std::vector<alpha_row>& alpha_ones() {
  static const std::vector<alpha_row> rows = {
      {2, {}},     {3, {}},           {4, {4, 5}},  {5, {}},
      {6, {5, 9}}, {7, {1, 2, 4, 5}}, {8, {}},      {9, {}},
      {10, {1, 2}}, {11, {2}},        {12, {1, 2}},
  };
  return rows;
}

inline std::optional<std::size_t> word_count(std::uint32_t m) {
  for (auto const& r : word_counts) {
    if (r.m == m) {
      return r.words;
    }
  }
  return std::nullopt;
}

inline std::optional<recurrence_row> recurrence(std::uint32_t m) {
  for (auto const& r : recurrences) {
    if (r.m == m) {
      return r;
    }
  }
  return std::nullopt;
}

inline std::optional<std::vector<std::size_t>> alpha(std::uint32_t m) {
  for (auto const& r : alpha_ones()) {
    if (r.m == m) {
      return r.ones;
    }
  }
  return std::nullopt;
}

}  // namespace tropdom::reference
