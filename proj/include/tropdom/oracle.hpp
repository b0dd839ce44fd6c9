#pragma once

// Exhaustive ground truth for γ₂ on small cylinders. Builds the graph
// explicitly and scans vertex subsets by increasing size; nothing here
// depends on the word/transfer-matrix machinery.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "tropdom/errors.hpp"

namespace tropdom::oracle {

struct vertex {
  std::size_t row    = 0;  // position on the path, 0..m-1
  std::size_t column = 0;  // position on the cycle, 0..n-1

  friend auto operator<=>(const vertex&, const vertex&) = default;
};

class cylinder_graph {
 public:
  cylinder_graph(std::size_t m, std::size_t n) : m_(m), n_(n) {
    if (m < 2 || n < 3) {
      throw domain_error("cylinder P_m□C_n needs m >= 2 and n >= 3 (got m=" +
                         std::to_string(m) + ", n=" + std::to_string(n) + ")");
    }
    adjacency_.resize(m * n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        auto& nb = adjacency_[id({i, j})];
        if (i > 0) {
          nb.push_back(id({i - 1, j}));
        }
        if (i + 1 < m) {
          nb.push_back(id({i + 1, j}));
        }
        nb.push_back(id({i, (j + n - 1) % n}));
        nb.push_back(id({i, (j + 1) % n}));
      }
    }
  }

  [[nodiscard]] std::size_t m() const noexcept { return m_; }
  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t order() const noexcept { return m_ * n_; }

  [[nodiscard]] std::size_t id(vertex v) const {
    if (v.row >= m_ || v.column >= n_) {
      throw domain_error("vertex (" + std::to_string(v.row) + ", " +
                         std::to_string(v.column) + ") outside P_" +
                         std::to_string(m_) + "□C_" + std::to_string(n_));
    }
    return v.column * m_ + v.row;
  }

  [[nodiscard]] vertex at(std::size_t id) const {
    return {id % m_, id / m_};
  }

  [[nodiscard]] const std::vector<std::size_t>& neighbors(
      std::size_t id) const {
    return adjacency_.at(id);
  }

  [[nodiscard]] std::size_t degree(std::size_t id) const {
    return neighbors(id).size();
  }

 private:
  std::size_t                           m_;
  std::size_t                           n_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

inline cylinder_graph build_cylinder(std::size_t m, std::size_t n) {
  return {m, n};
}

inline bool is_2_dominating(const cylinder_graph& g,
                            const std::vector<vertex>& set) {
  std::vector<char> in(g.order(), 0);
  for (auto v : set) {
    in[g.id(v)] = 1;
  }
  for (std::size_t v = 0; v < g.order(); ++v) {
    if (in[v]) {
      continue;
    }
    int hits = 0;
    for (auto u : g.neighbors(v)) {
      hits += in[u];
    }
    if (hits < 2) {
      return false;
    }
  }
  return true;
}

struct bruteforce_result {
  std::size_t         value = 0;
  std::vector<vertex> witness;
};

struct bruteforce_options {
  std::size_t budget  = 20;
  unsigned    workers = 1;
};

namespace detail {

// Next integer with the same popcount (Gosper's hack).
constexpr std::uint64_t next_combination(std::uint64_t x) noexcept {
  std::uint64_t const c = x & (~x + 1);
  std::uint64_t const r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

}  // namespace detail

// Minimum 2-dominating set by scanning subsets in increasing size, subsets
// of equal size in increasing bitmask order. Among optimal sets the witness
// is the one with the smallest bitmask.
inline bruteforce_result gamma2_bruteforce(const cylinder_graph& g,
                                           bruteforce_options    opts = {}) {
  std::size_t const order = g.order();
  if (order > opts.budget || order > 40) {
    throw resource_error("oracle refuses P_" + std::to_string(g.m()) + "□C_" +
                         std::to_string(g.n()) + ": " + std::to_string(order) +
                         " vertices exceed the budget of " +
                         std::to_string(opts.budget));
  }
  std::vector<std::uint64_t> nbr(order, 0);
  std::size_t                max_degree = 0;
  for (std::size_t v = 0; v < order; ++v) {
    for (auto u : g.neighbors(v)) {
      nbr[v] |= std::uint64_t{1} << u;
    }
    max_degree = std::max(max_degree, g.degree(v));
  }
  std::uint64_t const all = order == 64 ? ~std::uint64_t{0}
                                        : (std::uint64_t{1} << order) - 1;

  auto dominates = [&](std::uint64_t s) {
    std::uint64_t rest = all & ~s;
    while (rest) {
      auto const v = static_cast<std::size_t>(std::countr_zero(rest));
      rest &= rest - 1;
      if (std::popcount(nbr[v] & s) < 2) {
        return false;
      }
    }
    return true;
  };

  // Each outside vertex needs two edges into S, and S sends out at most
  // |S|·maxdeg edges: |S|·maxdeg >= 2(order − |S|).
  std::size_t size = 0;
  while (size * max_degree < 2 * (order - size)) {
    ++size;
  }

  unsigned const workers = std::max(1u, opts.workers);
  for (; size <= order; ++size) {
    std::uint64_t const first =
        size == 0 ? 0 : (size == 64 ? all : (std::uint64_t{1} << size) - 1);
    std::atomic<std::uint64_t> best{~std::uint64_t{0}};

    // Worker w tests the combinations whose rank is congruent to w.
    auto scan = [&](unsigned w) {
      std::uint64_t s    = first;
      std::uint64_t rank = 0;
      while (true) {
        if (rank % workers == w) {
          if (s >= best.load(std::memory_order_relaxed)) {
            return;
          }
          if (dominates(s)) {
            std::uint64_t cur = best.load();
            while (s < cur && !best.compare_exchange_weak(cur, s)) {
            }
            return;
          }
        }
        if (size == 0 || s == (first << (order - size))) {
          return;
        }
        s = detail::next_combination(s);
        ++rank;
      }
    };

    if (workers == 1) {
      scan(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back(scan, w);
      }
    }

    std::uint64_t const hit = best.load();
    if (hit != ~std::uint64_t{0} || (size == order && dominates(all))) {
      std::uint64_t const s = hit != ~std::uint64_t{0} ? hit : all;
      bruteforce_result   out;
      out.value = size;
      for (std::size_t v = 0; v < order; ++v) {
        if (s >> v & 1) {
          out.witness.push_back(g.at(v));
        }
      }
      return out;
    }
  }
  // Unreachable: the whole vertex set always 2-dominates.
  throw domain_error("oracle: no 2-dominating set found");
}

inline bruteforce_result gamma2_bruteforce(std::size_t m, std::size_t n,
                                           bruteforce_options opts = {}) {
  return gamma2_bruteforce(build_cylinder(m, n), opts);
}

}  // namespace tropdom::oracle
