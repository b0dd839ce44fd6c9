// tropdom: command-line driver for the 2-domination transfer-matrix
// pipeline.
//
// Exit codes: 0 success, 1 domain/parse error, 2 resource refusal,
// 3 verification failure.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tropdom/matrix_io.hpp"
#include "tropdom/oracle.hpp"
#include "tropdom/pipeline.hpp"
#include "tropdom/power_store.hpp"
#include "tropdom/recurrence.hpp"
#include "tropdom/report.hpp"
#include "tropdom/solver.hpp"
#include "tropdom/verify.hpp"
#include "tropdom/words.hpp"

namespace fs = std::filesystem;
using namespace tropdom;

namespace {

enum exit_code : int {
  exit_ok           = 0,
  exit_domain       = 1,
  exit_resource     = 2,
  exit_verification = 3,
};

struct global_options {
  unsigned      workers       = default_workers();
  std::uint64_t memory_budget = default_memory_budget;
  std::string   spill_dir;
  std::string   out_dir = ".";

  [[nodiscard]] std::optional<fs::path> spill() const {
    return spill_dir.empty() ? std::nullopt
                             : std::optional<fs::path>(spill_dir);
  }
  [[nodiscard]] fs::path out() const { return out_dir; }
};

pipeline_config make_config(const global_options& g, std::uint32_t m,
                            std::size_t k) {
  pipeline_config cfg;
  cfg.m             = m;
  cfg.max_power     = k;
  cfg.workers       = g.workers;
  cfg.memory_budget = g.memory_budget;
  cfg.spill_dir     = g.spill();
  cfg.output_dir    = g.out();
  return cfg;
}

tropical_matrix load_or_build_transfer(const global_options& g,
                                       std::uint32_t         m) {
  auto const path = g.out() / transfer_filename(m);
  if (fs::exists(path)) {
    auto stored = load_stored_matrix(path);
    if (stored.m == m) {
      return std::move(stored.matrix);
    }
  }
  auto a = build_transfer_matrix(m, {g.workers, g.memory_budget});
  fs::create_directories(g.out());
  save_matrix(a, path, m);
  return a;
}

int cmd_words(const global_options& g, std::uint32_t m, bool list) {
  auto const words = generate_correct_words(m);
  if (list) {
    for (auto const& w : words.words()) {
      std::cout << w.str() << '\n';
    }
  } else {
    fs::create_directories(g.out());
    write_word_list(words, g.out() / words_filename(m));
  }
  std::cerr << "m=" << m << " words=" << words.size()
            << " matrix_bytes=" << transfer_matrix_bytes(words.size()) << '\n';
  if (!list) {
    std::cout << nlohmann::json{{"m", m},
                                {"word_count", words.size()},
                                {"matrix_bytes",
                                 transfer_matrix_bytes(words.size())}}
                     .dump()
              << '\n';
  }
  return exit_ok;
}

int cmd_matrix(const global_options& g, std::uint32_t m) {
  auto const words = generate_correct_words(m);
  auto const a     = build_transfer_matrix(words, {g.workers, g.memory_budget});
  fs::create_directories(g.out());
  auto const path = g.out() / transfer_filename(m);
  save_matrix(a, path, m);
  std::cout << nlohmann::json{{"m", m},
                              {"dim", a.dim()},
                              {"bytes", a.bytes()},
                              {"file", path.string()}}
                   .dump()
            << '\n';
  return exit_ok;
}

int cmd_powers(const global_options& g, std::uint32_t m, std::size_t k) {
  auto const a = load_or_build_transfer(g, m);
  // Powers always go to disk here; they are the product of this command.
  storage_policy policy{0, g.spill().value_or(g.out())};
  auto const     store =
      power_sequence(a, k, policy, {g.workers, product_options{}.tile}, m);
  check_no_saturation(store, m);
  std::cout << nlohmann::json{{"m", m},
                              {"K", k},
                              {"dim", a.dim()},
                              {"dir", policy.spill_dir->string()}}
                   .dump()
            << '\n';
  return exit_ok;
}

int cmd_recurrence(const global_options& g, std::uint32_t m, std::size_t k) {
  auto const a = load_or_build_transfer(g, m);
  storage_policy policy{g.memory_budget, g.spill()};
  auto const     store =
      power_sequence(a, k, policy, {g.workers, product_options{}.tile}, m);
  auto cert = find_recurrence(store, k, {g.workers});
  if (!cert) {
    std::cerr << "no recurrence among A^1..A^" << k << '\n';
    return exit_verification;
  }
  cert->n0 = minimize_n0(store, *cert, {g.workers});
  if (!verify_recurrence(store, *cert, {g.workers})) {
    std::cerr << "recurrence does not propagate\n";
    return exit_verification;
  }
  auto const j = to_json(*cert);
  fs::create_directories(g.out());
  write_json(j, g.out() / ("certificate_m" + std::to_string(m) + ".json"));
  std::cout << j.dump() << '\n';
  return exit_ok;
}

int cmd_solve(const global_options& g, std::uint32_t m, std::size_t k,
              bool keep_powers) {
  auto cfg        = make_config(g, m, k);
  cfg.keep_powers = keep_powers;
  auto const report = run_pipeline(cfg);
  std::cout << format_table(*report.certificate, *report.formula);
  std::cout << "report: " << (g.out() / report_filename(m)).string() << '\n';
  for (auto const& [stage, s] : report.stage_seconds) {
    std::cerr << "  " << stage << ": " << s << " s\n";
  }
  return exit_ok;
}

int cmd_gamma2(const global_options& g, std::uint32_t m, std::size_t n) {
  require_path_order(m);
  require_cycle_order(n);
  auto const cached = g.out() / report_filename(m);
  if (fs::exists(cached)) {
    std::ifstream  in(cached);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw parse_error(parse_error::kind::bad_header,
                        cached.string() + ": " + e.what());
    }
    if (j.contains("formula")) {
      auto const f = formula_from_json(j.at("formula"));
      std::cout << nlohmann::json{{"m", m},
                                  {"n", n},
                                  {"gamma2", evaluate_formula(f, n)},
                                  {"source", "formula"}}
                       .dump()
                << '\n';
      return exit_ok;
    }
  }
  auto const words = generate_correct_words(m);
  if (transfer_matrix_bytes(words.size()) * 3 > g.memory_budget) {
    throw resource_error("no cached formula for m=" + std::to_string(m) +
                         " and explicit powers exceed the memory budget");
  }
  auto const a = build_transfer_matrix(words, {g.workers, g.memory_budget});
  // Only the last power is needed; iterate without a store.
  tropical_matrix p = a;
  for (std::size_t i = 2; i <= n; ++i) {
    p = minplus_product(a, p, {g.workers, product_options{}.tile});
  }
  std::cout << nlohmann::json{{"m", m},
                              {"n", n},
                              {"gamma2", diagonal_min(p).raw},
                              {"source", "powers"}}
                   .dump()
            << '\n';
  return exit_ok;
}

int cmd_oracle(const global_options& g, std::uint32_t m, std::size_t n,
               std::size_t budget) {
  auto const graph = oracle::build_cylinder(m, n);
  auto const res   = oracle::gamma2_bruteforce(graph, {budget, g.workers});
  std::cout << "gamma2(P_" << m << " x C_" << n << ") = " << res.value << '\n';
  for (auto v : res.witness) {
    std::cout << "(" << v.row << ", " << v.column << ")\n";
  }
  return exit_ok;
}

int cmd_verify(const global_options& g, std::uint32_t m, std::size_t k) {
  auto const results = verify_suite(make_config(g, m, k));
  bool       ok      = true;
  for (auto const& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) {
      std::cout << ": " << r.detail;
    }
    std::cout << '\n';
    ok = ok && r.passed;
  }
  return ok ? exit_ok : exit_verification;
}

int cmd_bench(const global_options& g, std::size_t dim, unsigned workers,
              unsigned reps, std::size_t tile) {
  if (dim < 1 || workers < 1 || reps < 1) {
    throw domain_error("bench: dim, workers and reps must be >= 1");
  }
  std::mt19937_64                         rng(dim);
  std::uniform_int_distribution<unsigned> dist(0, 20);
  tropical_matrix                         a(dim), b(dim);
  for (auto& v : a.entries()) {
    v = static_cast<std::uint16_t>(dist(rng));
  }
  for (auto& v : b.entries()) {
    v = static_cast<std::uint16_t>(dist(rng));
  }
  auto time = [&](unsigned w) {
    double best = 1e300;
    for (unsigned r = 0; r < reps; ++r) {
      auto const start = std::chrono::steady_clock::now();
      auto       c     = minplus_product(a, b, {w, tile});
      auto const s     = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
      best = std::min(best, s);
      if (c.dim() != dim) {
        throw integrity_error("bench: product has wrong size");
      }
    }
    return best;
  };
  double const t1 = time(1);
  double const tw = workers == 1 ? t1 : time(workers);
  std::cout << nlohmann::json{{"dim", dim},
                              {"workers", workers},
                              {"tile", tile},
                              {"reps", reps},
                              {"seconds_1", t1},
                              {"seconds_w", tw},
                              {"speedup", t1 / tw},
                              {"hardware_threads",
                               std::thread::hardware_concurrency()}}
                   .dump()
            << '\n';
  (void)g;
  return exit_ok;
}

int run(int argc, char** argv) {
  CLI::App app{"2-domination numbers of cylinders P_m x C_n via (min,+) powers"};
  app.require_subcommand(1);
  app.fallthrough();

  global_options g;
  app.add_option("--workers", g.workers,
                 "worker threads (default: $TROPDOM_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--memory-budget", g.memory_budget,
                 "bytes of matrices kept in memory")
      ->check(CLI::PositiveNumber);
  app.add_option("--spill-dir", g.spill_dir,
                 "directory for powers that do not fit the budget");
  app.add_option("--out", g.out_dir, "output directory for artifacts");

  std::uint32_t m      = 2;
  std::size_t   n      = 3;
  std::size_t   k      = 50;
  bool          list   = false;
  bool          keep   = false;
  std::size_t   budget = 20;
  std::size_t   dim    = 256;
  unsigned      bench_workers = 1;
  unsigned      reps   = 3;
  std::size_t   tile   = product_options{}.tile;

  auto add_m = [&](CLI::App* sub) {
    sub->add_option("--m", m, "path order")->required();
  };

  auto* words = app.add_subcommand("words", "enumerate correct m-words");
  add_m(words);
  words->add_flag("--list", list, "print the words instead of writing a file");

  auto* matrix = app.add_subcommand("matrix", "build and save A(D_m)");
  add_m(matrix);

  auto* powers = app.add_subcommand("powers", "compute and save A^1..A^K");
  add_m(powers);
  powers->add_option("--k", k, "highest power")->required();

  auto* recurrence = app.add_subcommand("recurrence",
                                        "find the recurrence certificate");
  add_m(recurrence);
  recurrence->add_option("--k", k, "highest power searched");

  auto* solve = app.add_subcommand("solve", "full pipeline");
  add_m(solve);
  solve->add_option("--k", k, "highest power");
  solve->add_flag("--keep-powers", keep, "also save every A^k");

  auto* gamma2 = app.add_subcommand("gamma2", "gamma_2(P_m x C_n)");
  add_m(gamma2);
  gamma2->add_option("--n", n, "cycle order")->required();

  auto* orc = app.add_subcommand("oracle", "exhaustive search");
  add_m(orc);
  orc->add_option("--n", n, "cycle order")->required();
  orc->add_option("--budget", budget, "largest vertex count to scan");

  auto* verify = app.add_subcommand("verify", "run the consistency suite");
  add_m(verify);
  verify->add_option("--k", k, "highest power");

  auto* bench = app.add_subcommand("bench", "time the (min,+) product");
  bench->add_option("--dim", dim, "matrix dimension")->required();
  bench->add_option("--workers", bench_workers, "parallel worker count")
      ->required();
  bench->add_option("--reps", reps, "repetitions (best time kept)");
  bench->add_option("--tile", tile, "column tile width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int const code = app.exit(e);
    return code == 0 ? exit_ok : exit_domain;
  }

  if (*words) return cmd_words(g, m, list);
  if (*matrix) return cmd_matrix(g, m);
  if (*powers) return cmd_powers(g, m, k);
  if (*recurrence) return cmd_recurrence(g, m, k);
  if (*solve) return cmd_solve(g, m, k, keep);
  if (*gamma2) return cmd_gamma2(g, m, n);
  if (*orc) return cmd_oracle(g, m, n, budget);
  if (*verify) return cmd_verify(g, m, k);
  if (*bench) return cmd_bench(g, dim, bench_workers, reps, tile);
  return exit_domain;
}

int exit_for(const std::exception& e) {
  if (dynamic_cast<const resource_error*>(&e)) return exit_resource;
  if (dynamic_cast<const integrity_error*>(&e)) return exit_verification;
  return exit_domain;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const stage_error& e) {
    std::cerr << "error in stage " << e.what() << '\n';
    try {
      std::rethrow_exception(e.cause());
    } catch (const std::exception& cause) {
      return exit_for(cause);
    }
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return exit_resource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e);
  }
  return exit_domain;
}
