#pragma once

// Dense (min,+) matrix arithmetic over the naturals with a saturating
// infinity sentinel.
//
// A^n computed with `minplus_product` gives, in entry (i,j), the minimum
// label of a walk of length n from vertex i to vertex j of the digraph whose
// labeled adjacency matrix is A.

#include <algorithm>
#include <atomic>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "tropdom/errors.hpp"

namespace tropdom {

template <std::unsigned_integral Raw>
struct tropical {
  using raw_type = Raw;

  static constexpr Raw sentinel = std::numeric_limits<Raw>::max();

  Raw raw = sentinel;

  static constexpr tropical infinity() noexcept { return {}; }
  static constexpr tropical zero() noexcept { return {Raw{0}}; }

  [[nodiscard]] constexpr bool is_infinite() const noexcept {
    return raw == sentinel;
  }

  constexpr auto operator<=>(const tropical&) const = default;

  // Saturating: x + y clamps to the sentinel, and sentinel + x = sentinel.
  static constexpr Raw add(Raw x, Raw y) noexcept {
    Raw s = static_cast<Raw>(x + y);
    return s < x ? sentinel : s;
  }

  friend constexpr tropical operator+(tropical x, tropical y) noexcept {
    return {add(x.raw, y.raw)};
  }
};

using tropical16 = tropical<std::uint16_t>;

template <std::unsigned_integral Raw>
constexpr tropical<Raw> min(tropical<Raw> x, tropical<Raw> y) noexcept {
  return x.raw <= y.raw ? x : y;
}

// Square, row-major, dense. Entries are stored as raw integers so the
// product kernel can vectorize; `at` wraps them back into `tropical`.
template <std::unsigned_integral Raw>
class basic_matrix {
 public:
  using raw_type   = Raw;
  using value_type = tropical<Raw>;

  static constexpr Raw sentinel = value_type::sentinel;

  basic_matrix() = default;

  explicit basic_matrix(std::size_t dim, Raw fill = sentinel)
      : dim_(dim), data_(dim * dim, fill) {}

  basic_matrix(std::size_t dim, std::vector<Raw> entries)
      : dim_(dim), data_(std::move(entries)) {
    if (data_.size() != dim_ * dim_) {
      throw domain_error("matrix entries: expected " +
                         std::to_string(dim_ * dim_) + ", got " +
                         std::to_string(data_.size()));
    }
  }

  basic_matrix(std::initializer_list<std::initializer_list<Raw>> rows)
      : dim_(rows.size()) {
    data_.reserve(dim_ * dim_);
    for (auto const& r : rows) {
      if (r.size() != dim_) {
        throw domain_error("matrix literal is not square");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  // 0 on the diagonal, infinity elsewhere.
  static basic_matrix identity(std::size_t dim) {
    basic_matrix id(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      id(i, i) = 0;
    }
    return id;
  }

  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] std::size_t bytes() const noexcept {
    return data_.size() * sizeof(Raw);
  }

  Raw& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * dim_ + j];
  }
  Raw operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * dim_ + j];
  }

  [[nodiscard]] value_type at(std::size_t i, std::size_t j) const {
    return {data_.at(i * dim_ + j)};
  }

  std::span<Raw>       row(std::size_t i) noexcept {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<const Raw> row(std::size_t i) const noexcept {
    return {data_.data() + i * dim_, dim_};
  }

  std::span<Raw>       entries() noexcept { return data_; }
  std::span<const Raw> entries() const noexcept { return data_; }

  [[nodiscard]] bool has_infinite() const noexcept {
    return std::find(data_.begin(), data_.end(), sentinel) != data_.end();
  }

  // Largest finite entry, or nullopt when every entry is infinite.
  [[nodiscard]] std::optional<Raw> max_finite() const noexcept {
    std::optional<Raw> best;
    for (Raw v : data_) {
      if (v != sentinel && (!best || v > *best)) {
        best = v;
      }
    }
    return best;
  }

  friend bool operator==(const basic_matrix&, const basic_matrix&) = default;

 private:
  std::size_t      dim_ = 0;
  std::vector<Raw> data_;
};

using tropical_matrix = basic_matrix<std::uint16_t>;
using tropical_matrix32 = basic_matrix<std::uint32_t>;

template <std::unsigned_integral To, std::unsigned_integral From>
basic_matrix<To> widen(const basic_matrix<From>& m) {
  static_assert(sizeof(To) >= sizeof(From));
  std::vector<To> out(m.size());
  auto            src = m.entries();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = src[i] == basic_matrix<From>::sentinel ? basic_matrix<To>::sentinel
                                                     : To{src[i]};
  }
  return basic_matrix<To>(m.dim(), std::move(out));
}

struct product_options {
  unsigned    workers = 1;
  // Width of the column strip of B kept hot while a block of rows of A
  // sweeps over it. Powers of two from 32 to 512 have register-blocked
  // kernels; other widths take a slower generic path.
  std::size_t tile = 256;
};

namespace detail {

// Splits [0, count) into `parts` contiguous ranges and runs `fn(begin, end)`
// on each, one thread per range. Ranges never overlap, so callers writing to
// disjoint outputs need no synchronization.
template <typename Fn>
void parallel_ranges(std::size_t count, unsigned parts, Fn&& fn) {
  parts = std::max(1u, parts);
  if (parts == 1 || count < 2) {
    fn(std::size_t{0}, count);
    return;
  }
  parts = static_cast<unsigned>(std::min<std::size_t>(parts, count));
  std::vector<std::jthread> pool;
  pool.reserve(parts - 1);
  std::size_t const chunk = count / parts;
  std::size_t const extra = count % parts;
  std::size_t       begin = 0;
  std::size_t       first_end = 0;
  for (unsigned p = 0; p < parts; ++p) {
    std::size_t end = begin + chunk + (p < extra ? 1 : 0);
    if (p == 0) {
      first_end = end;
    } else {
      pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    begin = end;
  }
  fn(std::size_t{0}, first_end);
}

inline constexpr std::size_t row_block = 4;

template <std::unsigned_integral Raw>
inline void relax(Raw* __restrict acc, Raw const* __restrict bk, Raw aik,
                  std::size_t w) noexcept {
  constexpr Raw inf = tropical<Raw>::sentinel;
  for (std::size_t j = 0; j < w; ++j) {
    Raw s  = static_cast<Raw>(aik + bk[j]);
    s      = s < aik ? inf : s;
    acc[j] = s < acc[j] ? s : acc[j];
  }
}

// Full row_block x W block with compile-time extents so the accumulators stay
// in vector registers.
template <std::size_t W, std::unsigned_integral Raw>
void minplus_block(const basic_matrix<Raw>& a, Raw const* bdata,
                   basic_matrix<Raw>& c, std::size_t i0, std::size_t j0) {
  constexpr Raw     inf = tropical<Raw>::sentinel;
  std::size_t const n   = a.dim();
  Raw               acc[row_block][W];
  for (auto& r : acc) {
    std::fill(std::begin(r), std::end(r), inf);
  }
  for (std::size_t k = 0; k < n; ++k) {
    Raw const* bk = bdata + k * n + j0;
    for (std::size_t r = 0; r < row_block; ++r) {
      Raw const aik = a(i0 + r, k);
      for (std::size_t j = 0; j < W; ++j) {
        Raw s     = static_cast<Raw>(aik + bk[j]);
        s         = s < aik ? inf : s;
        acc[r][j] = s < acc[r][j] ? s : acc[r][j];
      }
    }
  }
  for (std::size_t r = 0; r < row_block; ++r) {
    std::copy_n(acc[r], W, &c(i0 + r, j0));
  }
}

// Ragged edges and tile widths without a fixed-size instantiation.
template <std::unsigned_integral Raw>
void minplus_block_dynamic(const basic_matrix<Raw>& a, Raw const* bdata,
                           basic_matrix<Raw>& c, std::size_t i0,
                           std::size_t rows, std::size_t j0, std::size_t w,
                           std::vector<Raw>& acc) {
  constexpr Raw     inf = tropical<Raw>::sentinel;
  std::size_t const n   = a.dim();
  acc.assign(rows * w, inf);
  for (std::size_t k = 0; k < n; ++k) {
    Raw const* bk = bdata + k * n + j0;
    for (std::size_t r = 0; r < rows; ++r) {
      Raw const aik = a(i0 + r, k);
      if (aik != inf) {
        relax(acc.data() + r * w, bk, aik, w);
      }
    }
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(acc.data() + r * w, w, &c(i0 + r, j0));
  }
}

// C[rows, :] = min_k A[rows, k] + B[k, :] for rows in [row_begin, row_end).
template <std::unsigned_integral Raw>
void minplus_rows(const basic_matrix<Raw>& a,
                  const basic_matrix<Raw>& b,
                  basic_matrix<Raw>&       c,
                  std::size_t              row_begin,
                  std::size_t              row_end,
                  std::size_t              tile) {
  std::size_t const n     = a.dim();
  std::size_t const width = std::max<std::size_t>(1, tile);
  Raw const* const  bdata = b.entries().data();
  std::vector<Raw>  scratch;

  bool const fixed = width == 32 || width == 64 || width == 128 ||
                     width == 256 || width == 512;

  for (std::size_t i0 = row_begin; i0 < row_end; i0 += row_block) {
    std::size_t const rows = std::min(row_block, row_end - i0);
    std::size_t       j0   = 0;
    while (j0 < n) {
      std::size_t const w = std::min(width, n - j0);
      if (!fixed || rows != row_block || w < 32) {
        minplus_block_dynamic(a, bdata, c, i0, rows, j0, w, scratch);
        j0 += w;
        continue;
      }
      // Ragged right edge: peel off the largest fixed block that fits.
      std::size_t step = width;
      while (step > w) {
        step /= 2;
      }
      switch (step) {
        case 32: minplus_block<32>(a, bdata, c, i0, j0); break;
        case 64: minplus_block<64>(a, bdata, c, i0, j0); break;
        case 128: minplus_block<128>(a, bdata, c, i0, j0); break;
        case 256: minplus_block<256>(a, bdata, c, i0, j0); break;
        default: minplus_block<512>(a, bdata, c, i0, j0); break;
      }
      j0 += step;
    }
  }
}

}  // namespace detail

// (A ⊠ B)_ij = min_k (a_ik + b_kj). Output rows are partitioned across
// `opts.workers` threads; each row is owned by exactly one thread, so the
// result does not depend on the worker count.
template <std::unsigned_integral Raw>
basic_matrix<Raw> minplus_product(const basic_matrix<Raw>& a,
                                  const basic_matrix<Raw>& b,
                                  product_options          opts = {}) {
  if (a.dim() != b.dim()) {
    throw domain_error("minplus_product: dimension mismatch (" +
                       std::to_string(a.dim()) + " vs " +
                       std::to_string(b.dim()) + ")");
  }
  if (opts.workers < 1) {
    throw domain_error("minplus_product: workers must be >= 1");
  }
  basic_matrix<Raw> c(a.dim());
  detail::parallel_ranges(a.dim(), opts.workers,
                          [&](std::size_t begin, std::size_t end) {
                            detail::minplus_rows(a, b, c, begin, end,
                                                 opts.tile);
                          });
  return c;
}

// Textbook triple loop. Kept as the reference the tiled kernel is tested
// against.
template <std::unsigned_integral Raw>
basic_matrix<Raw> minplus_product_naive(const basic_matrix<Raw>& a,
                                        const basic_matrix<Raw>& b) {
  if (a.dim() != b.dim()) {
    throw domain_error("minplus_product_naive: dimension mismatch");
  }
  using T             = tropical<Raw>;
  std::size_t const n = a.dim();
  basic_matrix<Raw> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Raw best = T::sentinel;
      for (std::size_t k = 0; k < n; ++k) {
        best = std::min(best, T::add(a(i, k), b(k, j)));
      }
      c(i, j) = best;
    }
  }
  return c;
}

// (b ⊠ A)_ij = b + a_ij; infinity stays infinity.
template <std::unsigned_integral Raw>
basic_matrix<Raw> scalar_combine(std::uint64_t b, const basic_matrix<Raw>& a) {
  using T = tropical<Raw>;
  if (b >= T::sentinel) {
    throw domain_error("scalar_combine: scalar " + std::to_string(b) +
                       " is not below the infinity sentinel");
  }
  basic_matrix<Raw> out = a;
  for (Raw& v : out.entries()) {
    v = T::add(v, static_cast<Raw>(b));
  }
  return out;
}

enum class difference_mode {
  // Absent as soon as either matrix holds an infinite entry.
  strict,
  // Positions infinite in both matrices are skipped; infinite in exactly one
  // means absent. For diagnostics only.
  lenient,
};

struct difference_options {
  difference_mode mode    = difference_mode::strict;
  unsigned        workers = 1;
};

// Returns c when a_ij - b_ij == c >= 0 at every compared position.
template <std::unsigned_integral Raw>
std::optional<std::uint64_t> constant_difference(const basic_matrix<Raw>& a,
                                                 const basic_matrix<Raw>& b,
                                                 difference_options opts = {}) {
  if (a.dim() != b.dim()) {
    throw domain_error("constant_difference: dimension mismatch");
  }
  constexpr Raw inf = tropical<Raw>::sentinel;
  auto const    ea  = a.entries();
  auto const    eb  = b.entries();

  // The shift is fixed by the first comparable position; workers then only
  // confirm it.
  std::optional<std::uint64_t> shift;
  for (std::size_t p = 0; p < ea.size(); ++p) {
    bool const ia = ea[p] == inf;
    bool const ib = eb[p] == inf;
    if (ia || ib) {
      if (opts.mode == difference_mode::strict || ia != ib) {
        return std::nullopt;
      }
      continue;
    }
    if (ea[p] < eb[p]) {
      return std::nullopt;
    }
    shift = std::uint64_t{ea[p]} - eb[p];
    break;
  }
  if (!shift) {
    return std::nullopt;
  }

  Raw const         c = static_cast<Raw>(*shift);
  std::atomic<bool> mismatch{false};
  detail::parallel_ranges(
      ea.size(), opts.workers, [&](std::size_t begin, std::size_t end) {
        constexpr std::size_t stride = 4096;
        for (std::size_t s = begin; s < end; s += stride) {
          if (mismatch.load(std::memory_order_relaxed)) {
            return;
          }
          std::size_t const e = std::min(end, s + stride);
          for (std::size_t p = s; p < e; ++p) {
            bool const ia = ea[p] == inf;
            bool const ib = eb[p] == inf;
            bool       ok;
            if (ia || ib) {
              ok = opts.mode == difference_mode::lenient && ia == ib;
            } else {
              ok = ea[p] >= eb[p] && static_cast<Raw>(ea[p] - eb[p]) == c;
            }
            if (!ok) {
              mismatch.store(true, std::memory_order_relaxed);
              return;
            }
          }
        }
      });
  if (mismatch.load()) {
    return std::nullopt;
  }
  return shift;
}

}  // namespace tropdom
