#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace pcs {

enum class errc {
  invalid_argument,   // bad sizes, labels, grids, flags
  singular_system,    // linear solve hit a zero/degenerate pivot
  factorization,      // no admissible sweep factorization
  divergence,         // time marching produced non-finite values
  io,                 // file read/write failure
  post_shock,         // Burgers evaluation past shock formation
  benchmark_invalid   // timing run too short or too noisy to compare
};

/// Library-wide exception. `code()` maps onto the CLI exit codes.
class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

/// Sweep-operator factorization failure; carries the candidate roots of the
/// implicit symbol so callers can see how close to the unit circle they were.
class factorization_error : public error {
public:
  factorization_error(const std::string& what, std::vector<std::complex<double>> roots)
      : error(errc::factorization, what), roots_(std::move(roots)) {}
  const std::vector<std::complex<double>>& candidate_roots() const noexcept { return roots_; }

private:
  std::vector<std::complex<double>> roots_;
};

/// Time marching blew up; records the step at which values stopped being finite.
class divergence_error : public error {
public:
  divergence_error(const std::string& what, long step) : error(errc::divergence, what), step_(step) {}
  long step() const noexcept { return step_; }

private:
  long step_;
};

} // namespace pcs
