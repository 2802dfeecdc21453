#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pkt {

/// Malformed expression source. `offset` is the byte position of the
/// token where parsing failed (end-of-input reports the source length).
struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

/// Expression evaluated outside its domain (log of non-positive value,
/// division by zero, ...). The message names the offending subexpression
/// and the point.
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid chart or Lie-algebra document (bad keys, bad indices,
/// inconsistent dimensions).
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numeric degeneracy: non-positive-definite metric, ambiguous rank
/// split, singular solve.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pkt
