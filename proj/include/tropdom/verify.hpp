#pragma once

// Replays the consistency checks for one path order m. Each check is
// independent; a failing check does not stop the others.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tropdom/oracle.hpp"
#include "tropdom/pipeline.hpp"
#include "tropdom/reference_values.hpp"

namespace tropdom {

struct check_result {
  std::string name;
  bool        passed = false;
  std::string detail;
};

namespace detail {

inline void run_check(std::vector<check_result>& out, std::string name,
                      const std::function<std::string()>& body) {
  check_result r{std::move(name), false, {}};
  try {
    r.detail = body();
    r.passed = r.detail.empty();
  } catch (const std::exception& e) {
    r.detail = std::string("threw: ") + e.what();
  }
  if (r.passed) {
    r.detail = "ok";
  }
  out.push_back(std::move(r));
}

}  // namespace detail

inline std::vector<check_result> verify_suite(const pipeline_config& cfg) {
  std::vector<check_result> out;
  std::uint32_t const       m = cfg.m;
  std::size_t const         k = cfg.max_power;

  pipeline_state  state;
  pipeline_report report;
  try {
    report = run_pipeline(cfg, &state);
  } catch (const stage_error& e) {
    out.push_back({"pipeline", false, e.what()});
    return out;
  }
  out.push_back({"pipeline", true, "ok"});
  auto const& cert    = *report.certificate;
  auto const& formula = *report.formula;

  if (auto expected = reference::word_count(m)) {
    detail::run_check(out, "word count matches published table", [&] {
      return state.words.size() == *expected
                 ? std::string{}
                 : "got " + std::to_string(state.words.size()) +
                       ", expected " + std::to_string(*expected);
    });
  }

  if (m <= 8) {
    detail::run_check(out, "pruned generator equals 3^m filter", [&] {
      return generate_correct_words_by_filter(m).words() ==
                     state.words.words()
                 ? std::string{}
                 : "word lists differ";
    });
  }

  detail::run_check(out, "transfer matrix entries re-derived", [&] {
    std::size_t const n = state.words.size();
    auto check_entry = [&](std::size_t i, std::size_t j) -> bool {
      auto const& q = state.words[i];
      auto const& p = state.words[j];
      auto const  v = state.transfer(i, j);
      return can_follow(q, p) ? v == zero_count(p)
                              : v == tropical16::sentinel;
    };
    if (m <= 6) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!check_entry(i, j)) {
            return "entry (" + std::to_string(i) + "," + std::to_string(j) +
                   ") disagrees";
          }
        }
      }
    } else {
      std::mt19937_64                            rng(m);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (int s = 0; s < 20000; ++s) {
        auto i = pick(rng), j = pick(rng);
        if (!check_entry(i, j)) {
          return "entry (" + std::to_string(i) + "," + std::to_string(j) +
                 ") disagrees";
        }
      }
    }
    return std::string{};
  });

  if (m <= 8) {
    detail::run_check(out, "powers finite from exponent 3", [&] {
      for (std::size_t e = 3; e <= k; ++e) {
        if (state.powers.power(e)->has_infinite()) {
          return "A^" + std::to_string(e) + " has an infinite entry";
        }
      }
      return std::string{};
    });
  }

  detail::run_check(out, "no saturation (A^k <= m*k)", [&] {
    check_no_saturation(state.powers, m);
    return std::string{};
  });

  detail::run_check(out, "A^(i+j) == A^i ⊠ A^j", [&] {
    std::vector<std::pair<std::size_t, std::size_t>> pairs = {
        {1, 1}, {2, 3}, {k / 2, k - k / 2}};
    for (auto [i, j] : pairs) {
      if (i < 1 || j < 1 || i + j > k) {
        continue;
      }
      auto const prod = minplus_product(*state.powers.power(i),
                                        *state.powers.power(j),
                                        {cfg.workers, 256});
      if (prod != *state.powers.power(i + j)) {
        return "fails for i=" + std::to_string(i) + ", j=" + std::to_string(j);
      }
    }
    return std::string{};
  });

  if (auto ref = reference::recurrence(m); ref && k == 50) {
    detail::run_check(out, "certificate matches published (r0,n0,a,b)", [&] {
      bool const ok = cert.r0 == ref->r0 && cert.n0 == ref->n0 &&
                      cert.a == ref->a && cert.b == ref->b;
      return ok ? std::string{}
                : "got (" + std::to_string(cert.r0) + "," +
                      std::to_string(cert.n0) + "," + std::to_string(cert.a) +
                      "," + std::to_string(cert.b) + ")";
    });
  }

  detail::run_check(out, "recurrence holds on [n0, K-a]", [&] {
    return verify_recurrence(state.powers, cert) ? std::string{}
                                                 : "propagation fails";
  });

  detail::run_check(out, "recurrence fails at n0-1", [&] {
    if (cert.n0 <= 1) {
      return std::string{};
    }
    auto const c = constant_difference(*state.powers.power(cert.n0 - 1 + cert.a),
                                       *state.powers.power(cert.n0 - 1));
    return c && *c == cert.b ? "holds at n0-1, so n0 is not minimal"
                             : std::string{};
  });

  if (auto ones = reference::alpha(m)) {
    detail::run_check(out, "alpha matches published table", [&] {
      for (std::size_t r = 0; r < formula.a; ++r) {
        bool const one = std::find(ones->begin(), ones->end(), r) != ones->end();
        if (formula.alpha[r] != (one ? 1 : 0)) {
          return "alpha_" + std::to_string(r) + " = " +
                 std::to_string(formula.alpha[r]);
        }
      }
      return std::string{};
    });
  }

  detail::run_check(out, "formula equals diagonal minimum on [3, K]", [&] {
    for (std::size_t n = 3; n <= k; ++n) {
      auto const f = evaluate_formula(formula, n);
      auto const g = gamma2_exact(m, n, state.powers).value;
      if (f != g) {
        return "n=" + std::to_string(n) + ": formula " + std::to_string(f) +
               ", matrix " + std::to_string(g);
      }
    }
    return std::string{};
  });

  detail::run_check(out, "gamma2(n+a) - gamma2(n) == b for n >= n0", [&] {
    for (std::size_t n = std::max<std::size_t>(3, cert.n0); n + cert.a <= k;
         ++n) {
      auto const lo = gamma2_exact(m, n, state.powers).value;
      auto const hi = gamma2_exact(m, n + cert.a, state.powers).value;
      if (hi != lo + cert.b) {
        return "n=" + std::to_string(n);
      }
    }
    return std::string{};
  });

  detail::run_check(out, "ceil(b(n+a)/a) == ceil(bn/a) + b", [&] {
    for (std::size_t n = 0; n <= 10 * k; ++n) {
      if (ceil_div(cert.b * (n + cert.a), cert.a) !=
          ceil_div(cert.b * n, cert.a) + cert.b) {
        return "n=" + std::to_string(n);
      }
    }
    return std::string{};
  });

  detail::run_check(out, "agrees with exhaustive oracle (m*n <= 20)", [&] {
    for (std::size_t n = 3; m * n <= 20 && n <= k; ++n) {
      auto const o = oracle::gamma2_bruteforce(m, n, {20, cfg.workers}).value;
      auto const g = gamma2_exact(m, n, state.powers).value;
      if (o != g) {
        return "n=" + std::to_string(n) + ": oracle " + std::to_string(o) +
               ", matrix " + std::to_string(g);
      }
    }
    return std::string{};
  });

  if (m >= 8) {
    detail::run_check(out, "gamma2 == (m+2)n/3 for n = 0 mod 3", [&] {
      for (std::size_t n = 6; n <= k; n += 3) {
        auto const g = gamma2_exact(m, n, state.powers).value;
        if (g != (m + 2) * n / 3) {
          return "n=" + std::to_string(n) + ": " + std::to_string(g);
        }
      }
      return std::string{};
    });
  }

  return out;
}

}  // namespace tropdom
