#pragma once

// End-to-end driver: words → A(D_m) → powers → recurrence → n0 → boundary
// values → closed formula, with artifacts written to an output directory.

#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tropdom/errors.hpp"
#include "tropdom/matrix_io.hpp"
#include "tropdom/power_store.hpp"
#include "tropdom/recurrence.hpp"
#include "tropdom/report.hpp"
#include "tropdom/solver.hpp"
#include "tropdom/tropical.hpp"
#include "tropdom/words.hpp"

namespace tropdom {

inline unsigned default_workers() {
  if (char const* env = std::getenv("TROPDOM_WORKERS")) {
    try {
      auto const w = std::stoul(env);
      if (w >= 1) {
        return static_cast<unsigned>(w);
      }
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct pipeline_config {
  std::uint32_t                        m             = 2;
  std::size_t                          max_power     = 50;
  unsigned                             workers       = 1;
  std::uint64_t                        memory_budget = default_memory_budget;
  std::optional<std::filesystem::path> spill_dir  = std::nullopt;
  std::optional<std::filesystem::path> output_dir = std::nullopt;
  // Write every A^k next to the report, not only when spilling.
  bool                                 keep_powers = false;

  void validate() const {
    require_path_order(m);
    if (max_power < 3) {
      throw domain_error("K must be >= 3 (got " + std::to_string(max_power) +
                         ")");
    }
    if (workers < 1) {
      throw domain_error("workers must be >= 1");
    }
  }
};

struct pipeline_report {
  std::uint32_t                          m            = 0;
  std::size_t                            word_count   = 0;
  std::uint64_t                          matrix_bytes = 0;
  std::size_t                            max_power    = 0;
  std::optional<recurrence_certificate>  certificate;
  bool                                   recurrence_verified = false;
  std::optional<closed_formula>          formula;
  std::vector<std::pair<std::string, double>> stage_seconds;
  std::optional<std::string>             failed_stage;
  std::optional<std::string>             failure;
};

// Deterministic part of the report; wall times are kept out so identical
// runs produce identical files.
inline nlohmann::json to_json(const pipeline_report& r) {
  nlohmann::json j = {{"m", r.m},
                      {"word_count", r.word_count},
                      {"matrix_bytes", r.matrix_bytes},
                      {"K", r.max_power}};
  if (r.certificate) {
    j["certificate"] = to_json(*r.certificate);
    j["recurrence_verified"] = r.recurrence_verified;
  }
  if (r.formula) {
    j["formula"] = to_json(*r.formula);
  }
  if (r.failed_stage) {
    j["failed_stage"] = *r.failed_stage;
    j["error"]        = r.failure.value_or("");
  }
  return j;
}

inline nlohmann::json timings_json(const pipeline_report& r) {
  nlohmann::json j = nlohmann::json::object();
  for (auto const& [stage, s] : r.stage_seconds) {
    j[stage] = s;
  }
  return j;
}

inline std::string report_filename(std::uint32_t m) {
  return "report_m" + std::to_string(m) + ".json";
}

inline std::string transfer_filename(std::uint32_t m) {
  return "transfer_m" + std::to_string(m) + ".tmpm";
}

inline std::string words_filename(std::uint32_t m) {
  return "words_m" + std::to_string(m) + ".txt";
}

inline void write_json(const nlohmann::json& j,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw resource_error("cannot open " + path.string() + " for writing");
  }
  out << j.dump(2) << '\n';
}

// Thrown when a stage fails; carries the partial report and the original
// exception.
class stage_error : public error {
 public:
  stage_error(std::string stage, pipeline_report partial,
              std::exception_ptr cause, const std::string& what)
      : error(stage + ": " + what),
        stage_(std::move(stage)),
        partial_(std::move(partial)),
        cause_(std::move(cause)) {}

  [[nodiscard]] const std::string&     stage() const noexcept { return stage_; }
  [[nodiscard]] const pipeline_report& partial() const noexcept {
    return partial_;
  }
  [[nodiscard]] std::exception_ptr cause() const noexcept { return cause_; }

 private:
  std::string        stage_;
  pipeline_report    partial_;
  std::exception_ptr cause_;
};

// Everything later stages need besides the report.
struct pipeline_state {
  word_index                 words;
  tropical_matrix            transfer;
  power_store                powers;
  std::vector<gamma2_value>  boundary;
};

// Asserts that A^k stays within k·m, i.e. no sum came near the sentinel.
inline void check_no_saturation(const power_store& powers, std::uint32_t m) {
  for (std::size_t k = 1; k <= powers.max_exponent(); ++k) {
    auto const mx = powers.power(k)->max_finite();
    if (mx && *mx > std::uint64_t{m} * k) {
      throw integrity_error("A^" + std::to_string(k) + " has entry " +
                            std::to_string(*mx) + " above the bound " +
                            std::to_string(std::uint64_t{m} * k));
    }
  }
}

inline pipeline_report run_pipeline(const pipeline_config& cfg,
                                    pipeline_state*        state_out = nullptr) {
  cfg.validate();
  pipeline_report report;
  report.m         = cfg.m;
  report.max_power = cfg.max_power;
  pipeline_state state;

  namespace fs = std::filesystem;
  if (cfg.output_dir) {
    fs::create_directories(*cfg.output_dir);
  }

  auto stage = [&](const char* name, auto&& body) {
    auto const start = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      report.failed_stage = name;
      report.failure      = e.what();
      if (cfg.output_dir) {
        try {
          write_json(to_json(report), *cfg.output_dir / report_filename(cfg.m));
        } catch (const std::exception&) {
        }
      }
      throw stage_error(name, report, std::current_exception(), e.what());
    }
    report.stage_seconds.emplace_back(
        name, std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            start)
                  .count());
  };

  stage("words", [&] {
    state.words       = generate_correct_words(cfg.m);
    report.word_count = state.words.size();
    report.matrix_bytes = transfer_matrix_bytes(state.words.size());
    if (cfg.output_dir) {
      write_word_list(state.words, *cfg.output_dir / words_filename(cfg.m));
    }
  });

  stage("matrix", [&] {
    state.transfer = build_transfer_matrix(
        state.words, {cfg.workers, cfg.memory_budget});
    if (cfg.output_dir) {
      save_matrix(state.transfer, *cfg.output_dir / transfer_filename(cfg.m),
                  cfg.m);
    }
  });

  stage("powers", [&] {
    storage_policy policy{cfg.memory_budget, cfg.spill_dir};
    state.powers = power_sequence(state.transfer, cfg.max_power, policy,
                                  {cfg.workers, 256}, cfg.m);
    check_no_saturation(state.powers, cfg.m);
    if (cfg.output_dir && cfg.keep_powers && !state.powers.spilled()) {
      for (std::size_t k = 1; k <= cfg.max_power; ++k) {
        save_matrix(*state.powers.power(k),
                    *cfg.output_dir / power_filename(cfg.m, k), cfg.m);
      }
    }
  });

  stage("recurrence", [&] {
    auto cert = find_recurrence(state.powers, cfg.max_power, {cfg.workers});
    if (!cert) {
      throw integrity_error("no recurrence among A^1..A^" +
                            std::to_string(cfg.max_power) +
                            "; increase K");
    }
    report.certificate = *cert;
  });

  stage("minimize", [&] {
    report.certificate->n0 =
        minimize_n0(state.powers, *report.certificate, {cfg.workers});
  });

  stage("verify", [&] {
    report.recurrence_verified =
        verify_recurrence(state.powers, *report.certificate, {cfg.workers});
    if (!report.recurrence_verified) {
      throw integrity_error("recurrence does not propagate over [n0, K-a]");
    }
  });

  stage("boundary", [&] {
    state.boundary = boundary_values(state.powers, report.certificate->n0,
                                     report.certificate->a);
  });

  stage("formula", [&] {
    report.formula = build_formula(cfg.m, *report.certificate, state.boundary);
    if (cfg.output_dir) {
      write_json(to_json(report), *cfg.output_dir / report_filename(cfg.m));
    }
  });

  if (cfg.output_dir) {
    write_json(timings_json(report),
               *cfg.output_dir / ("timings_m" + std::to_string(cfg.m) + ".json"));
  }

  if (state_out) {
    *state_out = std::move(state);
  }
  return report;
}

}  // namespace tropdom
