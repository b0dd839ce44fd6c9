#pragma once

// Correct m-words and the labeled transfer matrix A(D_m).
//
// A 2-dominating set S of P_m□C_n labels every vertex of a column:
//   0  the vertex is in S
//   1  not in S, at least two neighbors in S within its column or the
//      previous one
//   2  not in S, exactly one such neighbor (so the next column must supply
//      the second)
// Reading a column top to bottom gives a word over {0,1,2}. Column words of
// consecutive columns are the arcs of D_m, and an arc is labeled with the
// number of zeros of its head, so closed walks of length n correspond to
// 2-dominating sets and their label sums to the set sizes.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <span>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tropdom/errors.hpp"
#include "tropdom/tropical.hpp"

namespace tropdom {

using letter = std::uint8_t;

// One column labeling. Not necessarily correct; see `is_correct_word`.
class column_word {
 public:
  column_word() = default;

  explicit column_word(std::vector<letter> letters)
      : letters_(std::move(letters)) {
    for (letter l : letters_) {
      if (l > 2) {
        throw domain_error("column word letter " + std::to_string(l) +
                           " outside {0,1,2}");
      }
    }
  }

  // "0120" style.
  static column_word parse(std::string_view text) {
    std::vector<letter> letters;
    letters.reserve(text.size());
    for (char c : text) {
      if (c < '0' || c > '2') {
        throw domain_error(std::string("column word character '") + c +
                           "' outside {0,1,2}");
      }
      letters.push_back(static_cast<letter>(c - '0'));
    }
    return column_word(std::move(letters));
  }

  [[nodiscard]] std::size_t size() const noexcept { return letters_.size(); }
  letter operator[](std::size_t i) const noexcept { return letters_[i]; }
  [[nodiscard]] const std::vector<letter>& letters() const noexcept {
    return letters_;
  }

  [[nodiscard]] std::string str() const {
    std::string s;
    s.reserve(letters_.size());
    for (letter l : letters_) {
      s.push_back(static_cast<char>('0' + l));
    }
    return s;
  }

  // Base-3 value with the first letter most significant; numeric order is
  // the lexicographic order on 0 < 1 < 2.
  [[nodiscard]] std::uint64_t code() const noexcept {
    std::uint64_t c = 0;
    for (letter l : letters_) {
      c = 3 * c + l;
    }
    return c;
  }

  friend auto operator<=>(const column_word&, const column_word&) = default;

 private:
  std::vector<letter> letters_;
};

namespace detail {

// True when the window ending at position i (the last letter placed) is
// allowed: no forbidden triple 020, 111, 211, 112, 212 and, for i == 1, no
// 11 or 12 at the start.
inline bool window_ok(const letter* w, std::size_t i) noexcept {
  if (i == 1 && w[0] == 1 && (w[1] == 1 || w[1] == 2)) {
    return false;
  }
  if (i >= 2) {
    letter const x = w[i - 2], y = w[i - 1], z = w[i];
    if (x == 0 && y == 2 && z == 0) {
      return false;
    }
    // 111, 211, 112, 212: a 1 flanked by nonzero letters on both sides.
    if (y == 1 && x != 0 && z != 0) {
      return false;
    }
  }
  return true;
}

inline bool tail_ok(const letter* w, std::size_t m) noexcept {
  return !(w[m - 1] == 1 && (w[m - 2] == 1 || w[m - 2] == 2));
}

}  // namespace detail

// Literal pattern search over the word's text; shares nothing with the
// prefix-pruned generator below.
inline bool is_correct_word(std::span<const letter> w) {
  if (w.size() < 2) {
    throw domain_error("column words have length >= 2");
  }
  std::string text;
  for (letter l : w) {
    if (l > 2) {
      throw domain_error("letter " + std::to_string(l) + " outside {0,1,2}");
    }
    text.push_back(static_cast<char>('0' + l));
  }
  for (std::string_view bad : {"020", "111", "211", "112", "212"}) {
    if (text.find(bad) != std::string::npos) {
      return false;
    }
  }
  std::string_view const head = std::string_view(text).substr(0, 2);
  std::string_view const tail = std::string_view(text).substr(text.size() - 2);
  return head != "11" && head != "12" && tail != "11" && tail != "21";
}

inline bool is_correct_word(const column_word& w) {
  return is_correct_word(std::span<const letter>(w.letters()));
}

inline bool is_correct_word(std::string_view text) {
  return is_correct_word(column_word::parse(text));
}

// All correct m-words in canonical (lexicographic) order with a reverse
// lookup from word to index.
class word_index {
 public:
  word_index() = default;

  explicit word_index(std::size_t m, std::vector<column_word> words)
      : m_(m), words_(std::move(words)) {
    position_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      position_.emplace(words_[i].code(), i);
    }
  }

  [[nodiscard]] std::size_t m() const noexcept { return m_; }
  [[nodiscard]] std::size_t size() const noexcept { return words_.size(); }
  [[nodiscard]] const std::vector<column_word>& words() const noexcept {
    return words_;
  }
  const column_word& operator[](std::size_t i) const { return words_.at(i); }

  [[nodiscard]] std::size_t index_of(const column_word& w) const {
    auto it = position_.find(w.code());
    if (w.size() != m_ || it == position_.end()) {
      throw domain_error("'" + w.str() + "' is not a correct " +
                         std::to_string(m_) + "-word");
    }
    return it->second;
  }

  [[nodiscard]] std::size_t index_of(std::string_view text) const {
    return index_of(column_word::parse(text));
  }

 private:
  std::size_t                                  m_ = 0;
  std::vector<column_word>                     words_;
  std::unordered_map<std::uint64_t, std::size_t> position_;
};

inline void require_path_order(std::size_t m) {
  if (m < 2) {
    throw domain_error("path order m must be >= 2 (got " + std::to_string(m) +
                       ")");
  }
  if (m > 40) {
    throw domain_error("path order m=" + std::to_string(m) +
                       " is beyond any feasible word enumeration");
  }
}

// Depth-first over prefixes, rejecting a prefix as soon as its last window
// is forbidden.
inline word_index generate_correct_words(std::size_t m) {
  require_path_order(m);
  std::vector<column_word> out;
  std::vector<letter>      w(m, 0);
  // Iterative DFS: `next[d]` is the next letter to try at depth d.
  std::vector<letter> next(m, 0);
  std::size_t         depth = 0;
  while (true) {
    if (next[depth] > 2) {
      if (depth == 0) {
        break;
      }
      next[depth] = 0;
      --depth;
      continue;
    }
    w[depth] = next[depth]++;
    if (depth > 0 && !detail::window_ok(w.data(), depth)) {
      continue;
    }
    if (depth + 1 == m) {
      if (detail::tail_ok(w.data(), m)) {
        out.emplace_back(w);
      }
      continue;
    }
    ++depth;
  }
  return word_index(m, std::move(out));
}

// Enumerates all 3^m strings and filters them. Slower; kept as the
// reference the pruned generator is checked against.
inline word_index generate_correct_words_by_filter(std::size_t m) {
  require_path_order(m);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    total *= 3;
  }
  std::vector<column_word> out;
  std::vector<letter>      w(m);
  for (std::uint64_t c = 0; c < total; ++c) {
    std::uint64_t x = c;
    for (std::size_t i = m; i-- > 0;) {
      w[i] = static_cast<letter>(x % 3);
      x /= 3;
    }
    if (is_correct_word(std::span<const letter>(w))) {
      out.emplace_back(w);
    }
  }
  return word_index(m, std::move(out));
}

// True iff p can be the column right after q.
inline bool can_follow(const column_word& q, const column_word& p) {
  if (q.size() != p.size()) {
    throw domain_error("can_follow: word lengths differ (" +
                       std::to_string(q.size()) + " vs " +
                       std::to_string(p.size()) + ")");
  }
  std::size_t const m = p.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (q[i] == 2 && p[i] != 0) {
      return false;
    }
    if (p[i] == 0) {
      continue;
    }
    int zeros = q[i] == 0 ? 1 : 0;
    if (i > 0 && p[i - 1] == 0) {
      ++zeros;
    }
    if (i + 1 < m && p[i + 1] == 0) {
      ++zeros;
    }
    // At the ends the neighbor set has two elements, so "at least two"
    // means both.
    if (p[i] == 2 ? zeros != 1 : zeros < 2) {
      return false;
    }
  }
  return true;
}

inline std::size_t zero_count(const column_word& p) noexcept {
  return static_cast<std::size_t>(
      std::count(p.letters().begin(), p.letters().end(), letter{0}));
}

inline std::uint64_t transfer_matrix_bytes(std::size_t words) {
  return std::uint64_t{words} * words * sizeof(std::uint16_t);
}

struct transfer_options {
  unsigned      workers       = 1;
  std::uint64_t memory_budget = std::uint64_t{8} << 30;
};

// Entry (i, j) is zero_count(word_j) when word_j can follow word_i, else
// infinity. Rows are partitioned across workers.
inline tropical_matrix build_transfer_matrix(const word_index&  words,
                                             transfer_options opts = {}) {
  std::size_t const   n     = words.size();
  std::uint64_t const bytes = transfer_matrix_bytes(n);
  if (bytes > opts.memory_budget) {
    throw resource_error("transfer matrix for m=" + std::to_string(words.m()) +
                         " needs " + std::to_string(bytes) +
                         " bytes, over the " +
                         std::to_string(opts.memory_budget) + "-byte budget");
  }
  tropical_matrix a(n);
  std::vector<std::uint16_t> zeros(n);
  for (std::size_t j = 0; j < n; ++j) {
    zeros[j] = static_cast<std::uint16_t>(zero_count(words[j]));
  }
  detail::parallel_ranges(n, opts.workers,
                          [&](std::size_t begin, std::size_t end) {
                            for (std::size_t i = begin; i < end; ++i) {
                              auto const& q = words.words()[i];
                              for (std::size_t j = 0; j < n; ++j) {
                                if (can_follow(q, words.words()[j])) {
                                  a(i, j) = zeros[j];
                                }
                              }
                            }
                          });
  return a;
}

inline tropical_matrix build_transfer_matrix(std::size_t      m,
                                             transfer_options opts = {}) {
  return build_transfer_matrix(generate_correct_words(m), opts);
}

inline void write_word_list(const word_index&            words,
                            const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw resource_error("cannot open " + path.string() + " for writing");
  }
  for (auto const& w : words.words()) {
    out << w.str() << '\n';
  }
  if (!out.flush()) {
    throw resource_error("write failed: " + path.string());
  }
}

}  // namespace tropdom
