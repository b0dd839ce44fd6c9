#pragma once

// On-disk format for 16-bit tropical matrices (all fields little-endian):
//
//   offset  size  field
//   0       4     magic "TMPM"
//   4       4     u32 format version (1)
//   8       4     u32 path order m, 0 when not a transfer matrix
//   12      8     u64 dim
//   20      2*d²  u16 entries, row-major; 0xFFFF is infinity

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "tropdom/errors.hpp"
#include "tropdom/tropical.hpp"

namespace tropdom {

inline constexpr std::array<char, 4> matrix_magic   = {'T', 'M', 'P', 'M'};
inline constexpr std::uint32_t       matrix_version = 1;
inline constexpr std::size_t         matrix_header_bytes = 20;

struct stored_matrix {
  std::uint32_t   m = 0;
  tropical_matrix matrix;
};

namespace detail {

template <std::unsigned_integral U>
void put_le(std::vector<char>& out, U v) {
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
  }
}

template <std::unsigned_integral U>
U get_le(const char* p) {
  U v = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) {
    v |= static_cast<U>(static_cast<unsigned char>(p[b])) << (8 * b);
  }
  return v;
}

}  // namespace detail

inline void save_matrix(const tropical_matrix&       a,
                        const std::filesystem::path& path,
                        std::uint32_t                m = 0) {
  std::vector<char> header;
  header.insert(header.end(), matrix_magic.begin(), matrix_magic.end());
  detail::put_le<std::uint32_t>(header, matrix_version);
  detail::put_le<std::uint32_t>(header, m);
  detail::put_le<std::uint64_t>(header, a.dim());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw resource_error("cannot open " + path.string() + " for writing");
  }
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  auto const entries = a.entries();
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(entries.data()),
              static_cast<std::streamsize>(entries.size_bytes()));
  } else {
    std::vector<char> payload;
    payload.reserve(entries.size_bytes());
    for (auto v : entries) {
      detail::put_le<std::uint16_t>(payload, v);
    }
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  }
  if (!out.flush()) {
    throw resource_error("write failed: " + path.string() + " (" +
                         std::to_string(matrix_header_bytes +
                                        entries.size_bytes()) +
                         " bytes)");
  }
}

inline stored_matrix load_stored_matrix(const std::filesystem::path& path) {
  using kind = parse_error::kind;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw parse_error(kind::io, "cannot open " + path.string());
  }
  std::array<char, matrix_header_bytes> header{};
  in.read(header.data(), header.size());
  if (in.gcount() < 4 ||
      std::memcmp(header.data(), matrix_magic.data(), 4) != 0) {
    throw parse_error(kind::bad_magic, path.string() + ": not a TMPM file");
  }
  if (static_cast<std::size_t>(in.gcount()) < header.size()) {
    throw parse_error(kind::truncated, path.string() + ": truncated header");
  }
  auto const version = detail::get_le<std::uint32_t>(header.data() + 4);
  if (version != matrix_version) {
    throw parse_error(kind::bad_version,
                      path.string() + ": unsupported version " +
                          std::to_string(version));
  }
  stored_matrix out;
  out.m              = detail::get_le<std::uint32_t>(header.data() + 8);
  auto const dim     = detail::get_le<std::uint64_t>(header.data() + 12);
  // 2^32 rows would already be 32 EiB of payload.
  if (dim >= (std::uint64_t{1} << 32)) {
    throw parse_error(kind::bad_header,
                      path.string() + ": implausible dim " +
                          std::to_string(dim));
  }
  std::uint64_t const count = dim * dim;

  std::error_code ec;
  auto const      file_size = std::filesystem::file_size(path, ec);
  if (!ec && file_size < matrix_header_bytes + 2 * count) {
    throw parse_error(kind::truncated,
                      path.string() + ": payload truncated (expected " +
                          std::to_string(2 * count) + " bytes)");
  }

  std::vector<std::uint16_t> entries(count);
  in.read(reinterpret_cast<char*>(entries.data()),
          static_cast<std::streamsize>(2 * count));
  if (static_cast<std::uint64_t>(in.gcount()) != 2 * count) {
    throw parse_error(kind::truncated, path.string() + ": payload truncated");
  }
  if constexpr (std::endian::native != std::endian::little) {
    for (auto& v : entries) {
      v = detail::get_le<std::uint16_t>(reinterpret_cast<const char*>(&v));
    }
  }
  out.matrix = tropical_matrix(dim, std::move(entries));
  return out;
}

inline tropical_matrix load_matrix(const std::filesystem::path& path) {
  return load_stored_matrix(path).matrix;
}

}  // namespace tropdom
