#pragma once

#include <stdexcept>
#include <string>

namespace tropdom {

// Every failure raised by the library derives from `error`. The CLI maps the
// concrete type to a process exit code.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: alphabet violations, dimension mismatch, m < 2, n < 3.
class domain_error : public error {
 public:
  using error::error;
};

// Malformed input files.
class parse_error : public error {
 public:
  enum class kind { bad_magic, bad_version, truncated, bad_header, io };

  parse_error(kind k, const std::string& what) : error(what), kind_(k) {}

  [[nodiscard]] kind reason() const noexcept { return kind_; }

 private:
  kind kind_;
};

// Refusals caused by memory/disk budgets or exponential blow-up guards.
class resource_error : public error {
 public:
  using error::error;
};

// Inputs that are individually well-formed but mutually inconsistent, such
// as a recurrence certificate that does not hold on the stored powers.
class integrity_error : public error {
 public:
  using error::error;
};

}  // namespace tropdom
