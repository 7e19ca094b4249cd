#pragma once

#include <stdexcept>
#include <string>

namespace pevpcond {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  non_convergence,
  exact_singular,
  no_null_vector,
  degenerate_instance,
  untrusted_eigenpair,
  singular_curve_point,
  oracle_divergence,
  too_many_resamples,
};

const char* to_string(ErrorCode code) noexcept;

/// Base for every error raised by the library. The code identifies the
/// failure class so callers (and the C API) can map it without string
/// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pevpcond
