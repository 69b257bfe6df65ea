#ifndef FLATNORM_ERRORS_HPP
#define FLATNORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace flatnorm {

// Error taxonomy mirrors the CLI exit codes: parse failures exit 2, invalid
// metrics exit 3, solver non-convergence exit 4, index-cap overruns exit 5.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files: CSV, metric matrix, family manifest.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Metric axiom violations detected while building a space.
class MetricError : public Error {
 public:
  using Error::Error;
};

// LP or flow solver failed to converge within its iteration budget.
class SolverError : public Error {
 public:
  using Error::Error;
};

// A certified index search ran past the configured index cap.
class IndexCapError : public Error {
 public:
  using Error::Error;
};

// Operation misuse: mixed spaces, negative mass where forbidden, bad deltas.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace flatnorm

#endif
