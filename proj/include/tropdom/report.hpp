#pragma once

// JSON encodings of certificates and formulas, plus the plain-text tables.

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "tropdom/errors.hpp"
#include "tropdom/recurrence.hpp"
#include "tropdom/solver.hpp"

namespace tropdom {

inline nlohmann::json to_json(const recurrence_certificate& c) {
  return {{"m", c.m},   {"r0", c.r0}, {"n0", c.n0},
          {"a", c.a},   {"b", c.b},   {"K", c.max_k}};
}

inline recurrence_certificate certificate_from_json(const nlohmann::json& j) {
  try {
    recurrence_certificate c;
    c.m     = j.at("m").get<std::uint32_t>();
    c.r0    = j.at("r0").get<std::size_t>();
    c.n0    = j.at("n0").get<std::size_t>();
    c.a     = j.at("a").get<std::size_t>();
    c.b     = j.at("b").get<std::uint64_t>();
    c.max_k = j.at("K").get<std::size_t>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(parse_error::kind::bad_header,
                      std::string("certificate JSON: ") + e.what());
  }
}

inline nlohmann::json to_json(const closed_formula& f) {
  nlohmann::json alpha = nlohmann::json::object();
  for (std::size_t k = 0; k < f.alpha.size(); ++k) {
    alpha[std::to_string(k)] = f.alpha[k];
  }
  nlohmann::json exceptions = nlohmann::json::array();
  for (auto const& [n, v] : f.exceptions) {
    exceptions.push_back({{"n", n}, {"value", v}});
  }
  nlohmann::json boundary = nlohmann::json::array();
  for (auto const& g : f.boundary) {
    boundary.push_back({{"n", g.n}, {"value", g.value}});
  }
  return {{"m", f.m},
          {"a", f.a},
          {"b", f.b},
          {"n0", f.n0},
          {"alpha", alpha},
          {"exceptions", exceptions},
          {"boundary", boundary}};
}

inline closed_formula formula_from_json(const nlohmann::json& j) {
  try {
    closed_formula f;
    f.m  = j.at("m").get<std::uint32_t>();
    f.a  = j.at("a").get<std::size_t>();
    f.b  = j.at("b").get<std::uint64_t>();
    f.n0 = j.at("n0").get<std::size_t>();
    if (f.a < 1) {
      throw parse_error(parse_error::kind::bad_header, "formula JSON: a < 1");
    }
    f.alpha.assign(f.a, 0);
    for (auto const& [k, v] : j.at("alpha").items()) {
      auto const idx = std::stoul(k);
      if (idx >= f.a) {
        throw parse_error(parse_error::kind::bad_header,
                          "formula JSON: alpha index " + k + " >= a");
      }
      f.alpha[idx] = v.get<std::int64_t>();
    }
    for (auto const& e : j.at("exceptions")) {
      f.exceptions[e.at("n").get<std::size_t>()] =
          e.at("value").get<std::uint64_t>();
    }
    for (auto const& e : j.at("boundary")) {
      f.boundary.push_back({f.m, e.at("n").get<std::size_t>(),
                            e.at("value").get<std::uint64_t>()});
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(parse_error::kind::bad_header,
                      std::string("formula JSON: ") + e.what());
  }
}

// One row in the layout of the recurrence/α tables:
//   m  r0  n0  a  b | k with α=1 | exceptions
inline std::string format_table(const recurrence_certificate& c,
                                const closed_formula&          f) {
  std::ostringstream out;
  out << std::setw(3) << "m" << std::setw(6) << "r0" << std::setw(6) << "n0"
      << std::setw(5) << "a" << std::setw(6) << "b" << "  alpha_k != 0"
      << "  exceptions\n";
  out << std::setw(3) << c.m << std::setw(6) << c.r0 << std::setw(6) << c.n0
      << std::setw(5) << c.a << std::setw(6) << c.b << "  ";
  std::string nonzero;
  for (std::size_t k = 0; k < f.alpha.size(); ++k) {
    if (f.alpha[k] != 0) {
      nonzero += (nonzero.empty() ? "" : ",") + std::to_string(k) + ":" +
                 std::to_string(f.alpha[k]);
    }
  }
  out << std::left << std::setw(13) << (nonzero.empty() ? "none" : nonzero)
      << std::right << "  ";
  std::string exc;
  for (auto const& [n, v] : f.exceptions) {
    exc += (exc.empty() ? "" : ", ") + ("n=" + std::to_string(n) + ":" +
                                        std::to_string(v));
  }
  out << (exc.empty() ? "none" : exc) << '\n';
  return out.str();
}

}  // namespace tropdom
