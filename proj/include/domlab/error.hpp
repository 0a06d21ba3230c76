#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace domlab {

enum class ErrorKind {
  invalid_point,
  singular_path,
  undersampled_path,
  mismatched_surface,
  out_of_range,
  invalid_data,
  precondition,
  hypothesis_violation,
  solver_failure,
  invalid_problem,
  inconsistent_data,
  degenerate_lattice,
  singular_lift,
  start_mismatch,
  contraction_violated,
  not_applicable,
  grid_too_small,
  invalid_input,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `clause()` names the violated
/// condition where one applies (e.g. "h_branched_immersion").
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string clause = {})
      : std::runtime_error(message), kind_(kind), clause_(std::move(clause)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& clause() const noexcept { return clause_; }

 private:
  ErrorKind kind_;
  std::string clause_;
};

}  // namespace domlab
