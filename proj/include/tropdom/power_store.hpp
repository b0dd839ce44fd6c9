#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "tropdom/errors.hpp"
#include "tropdom/matrix_io.hpp"
#include "tropdom/tropical.hpp"

namespace tropdom {

inline constexpr std::uint64_t default_memory_budget = std::uint64_t{8} << 30;

struct storage_policy {
  std::uint64_t                        memory_budget = default_memory_budget;
  std::optional<std::filesystem::path> spill_dir;
};

inline std::string power_filename(std::uint32_t m, std::size_t k) {
  return "power_m" + std::to_string(m) + "_k" + std::to_string(k) + ".tmpm";
}

// Holds A^1 .. A^K either in memory or as TMPM files in a spill directory.
// Filled once by `power_sequence`; read-only (and safe to share across
// threads) afterwards.
class power_store {
 public:
  using matrix_ptr = std::shared_ptr<const tropical_matrix>;

  power_store() = default;

  [[nodiscard]] std::size_t   max_exponent() const noexcept { return count_; }
  [[nodiscard]] std::size_t   dim() const noexcept { return dim_; }
  [[nodiscard]] std::uint32_t m() const noexcept { return m_; }
  [[nodiscard]] bool spilled() const noexcept { return spill_dir_.has_value(); }

  [[nodiscard]] bool contains(std::size_t k) const noexcept {
    return k >= 1 && k <= count_;
  }

  // A^k, loaded from disk when spilled.
  [[nodiscard]] matrix_ptr power(std::size_t k) const {
    if (!contains(k)) {
      throw integrity_error("power store has no exponent " +
                            std::to_string(k) + " (holds 1.." +
                            std::to_string(count_) + ")");
    }
    if (spill_dir_) {
      return std::make_shared<const tropical_matrix>(
          load_matrix(*spill_dir_ / power_filename(m_, k)));
    }
    return in_memory_[k - 1];
  }

  [[nodiscard]] const tropical_matrix& base() const { return *base_; }

  void append(tropical_matrix p) {
    if (spill_dir_) {
      auto const path = *spill_dir_ / power_filename(m_, count_ + 1);
      try {
        save_matrix(p, path, m_);
      } catch (const resource_error& e) {
        throw resource_error("storing power " + std::to_string(count_ + 1) +
                             ": " + e.what());
      }
      if (count_ == 0) {
        base_ = std::make_shared<const tropical_matrix>(std::move(p));
      }
    } else {
      auto ptr = std::make_shared<const tropical_matrix>(std::move(p));
      if (count_ == 0) {
        base_ = ptr;
      }
      in_memory_.push_back(std::move(ptr));
    }
    ++count_;
  }

  static power_store in_memory(std::size_t dim, std::uint32_t m) {
    power_store s;
    s.dim_ = dim;
    s.m_   = m;
    return s;
  }

  static power_store on_disk(std::size_t dim, std::uint32_t m,
                             std::filesystem::path dir) {
    power_store s;
    s.dim_       = dim;
    s.m_         = m;
    s.spill_dir_ = std::move(dir);
    return s;
  }

 private:
  std::size_t                          dim_   = 0;
  std::uint32_t                        m_     = 0;
  std::size_t                          count_ = 0;
  matrix_ptr                           base_;
  std::vector<matrix_ptr>              in_memory_;
  std::optional<std::filesystem::path> spill_dir_;
};

// Bytes needed to hold K powers of a dim x dim 16-bit matrix in memory.
inline std::uint64_t powers_bytes(std::size_t dim, std::size_t k) {
  return std::uint64_t{k} * dim * dim * sizeof(std::uint16_t);
}

// A^i = A ⊠ A^(i-1) for i = 1..K. Powers stay in memory when they fit
// `policy.memory_budget`, otherwise they are spilled to `policy.spill_dir`.
inline power_store power_sequence(const tropical_matrix& base, std::size_t k,
                                  const storage_policy& policy,
                                  product_options opts = {},
                                  std::uint32_t   m    = 0) {
  if (k < 1) {
    throw domain_error("power_sequence: K must be >= 1");
  }
  std::uint64_t const need = powers_bytes(base.dim(), k);
  power_store         store;
  if (need <= policy.memory_budget) {
    store = power_store::in_memory(base.dim(), m);
  } else if (policy.spill_dir) {
    // Spilling still needs the base plus two working powers resident.
    if (3 * base.bytes() > policy.memory_budget) {
      throw resource_error("power_sequence: three " +
                           std::to_string(base.bytes()) +
                           "-byte matrices exceed the memory budget");
    }
    std::filesystem::create_directories(*policy.spill_dir);
    store = power_store::on_disk(base.dim(), m, *policy.spill_dir);
  } else {
    throw resource_error("power_sequence: " + std::to_string(k) +
                         " powers need " + std::to_string(need) +
                         " bytes, over the " +
                         std::to_string(policy.memory_budget) +
                         "-byte budget, and no spill directory is set");
  }

  store.append(base);
  tropical_matrix previous = base;
  for (std::size_t i = 2; i <= k; ++i) {
    try {
      previous = minplus_product(base, previous, opts);
    } catch (const std::bad_alloc&) {
      throw resource_error("power_sequence: out of memory at power " +
                           std::to_string(i));
    }
    store.append(previous);
  }
  return store;
}

}  // namespace tropdom
