#ifndef LAMOM_ERROR_HPP
#define LAMOM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lamom {

enum class errc {
  not_square,
  not_hermitian,
  dimension_mismatch,
  size_overflow,
  param_out_of_range,
  parse_error,
  invariant_violation,
  degenerate_normalization,
  negative_normalization,
  no_trace_scale,
  q2_out_of_range,
  order_too_large,
  infeasible,
  probability_defect,
  bad_trace,
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& msg, double residual = 0.0)
      : std::runtime_error(msg), code_(code), residual_(residual) {}

  errc code() const noexcept { return code_; }
  double residual() const noexcept { return residual_; }

private:
  errc code_;
  double residual_;
};

// Errors caused by bad user input map to CLI exit code 2; numerical or
// verification failures map to exit code 3.
inline bool is_input_error(errc c) {
  switch (c) {
    case errc::not_square:
    case errc::not_hermitian:
    case errc::dimension_mismatch:
    case errc::size_overflow:
    case errc::param_out_of_range:
    case errc::parse_error:
    case errc::invariant_violation:
    case errc::no_trace_scale:
    case errc::q2_out_of_range:
    case errc::order_too_large:
    case errc::bad_trace:
      return true;
    case errc::degenerate_normalization:
    case errc::negative_normalization:
    case errc::infeasible:
    case errc::probability_defect:
      return false;
  }
  return false;
}

}  // namespace lamom

#endif
