#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace taskbench {

// Syntax error in DSL source or a query text. `offset` is the byte offset
// of the offending token in the input.
struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(std::string msg, std::size_t offset)
      : std::runtime_error(std::move(msg)), offset(offset) {}
};

struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad input files, malformed records, schema mismatches.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Backend failures: unknown relation, endpoint trouble, unsupported query
// construct in the local evaluator.
struct BackendError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace taskbench
