#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace facet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `offset` is a byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class UnknownSymbolError : public Error {
 public:
  using Error::Error;
};

class GrammarError : public Error {
 public:
  GrammarError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

/// An evaluator produced an atom outside its aspect set or beyond the arity.
class IllFormedEvaluator : public Error {
 public:
  using Error::Error;
};

/// Structure description rejected (bad JSON shape, unknown world, ...).
class StructureError : public Error {
 public:
  using Error::Error;
};

}  // namespace facet
