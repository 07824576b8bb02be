#ifndef HMFLOW_ERRORS_HPP
#define HMFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hmflow {

enum class errc {
  ok = 0,
  invalid_argument,
  dimension_too_small,
  domain_error,
  index_out_of_range,
  quadrature_non_convergent,
  non_integrable,
  neutral_mode,
  negative_mode,
  sign_error,
  empty_overlap,
  spec_violation,
  series_start_failure,
  integration_blowup,
  division_underflow,
  fit_unstable,
  insufficient_decades,
  fit_diverged,
  step_size_underflow,
  cfl_violation,
  no_blowup,
  window_too_short,
  io_error,
};

const char* errc_name(errc code);

/// Exception carrying a stable error code, so the C API can translate
/// failures without string matching.
class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace hmflow

#endif
