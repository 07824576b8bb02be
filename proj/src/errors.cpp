#include "errors.hpp"

namespace hmflow {

const char* errc_name(errc code) {
  switch (code) {
    case errc::ok: return "ok";
    case errc::invalid_argument: return "invalid_argument";
    case errc::dimension_too_small: return "dimension_too_small";
    case errc::domain_error: return "domain_error";
    case errc::index_out_of_range: return "index_out_of_range";
    case errc::quadrature_non_convergent: return "quadrature_non_convergent";
    case errc::non_integrable: return "non_integrable";
    case errc::neutral_mode: return "neutral_mode";
    case errc::negative_mode: return "negative_mode";
    case errc::sign_error: return "sign_error";
    case errc::empty_overlap: return "empty_overlap";
    case errc::spec_violation: return "spec_violation";
    case errc::series_start_failure: return "series_start_failure";
    case errc::integration_blowup: return "integration_blowup";
    case errc::division_underflow: return "division_underflow";
    case errc::fit_unstable: return "fit_unstable";
    case errc::insufficient_decades: return "insufficient_decades";
    case errc::fit_diverged: return "fit_diverged";
    case errc::step_size_underflow: return "step_size_underflow";
    case errc::cfl_violation: return "cfl_violation";
    case errc::no_blowup: return "no_blowup";
    case errc::window_too_short: return "window_too_short";
    case errc::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace hmflow
