#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zs {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t col, const std::string& what)
      : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
        line(line),
        col(col) {}
  std::size_t line;
  std::size_t col;
};

#define ZS_SIMPLE_ERROR(Name)            \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  };

ZS_SIMPLE_ERROR(UndefinedVariable)
ZS_SIMPLE_ERROR(DuplicateEquation)
ZS_SIMPLE_ERROR(ArityZero)
ZS_SIMPLE_ERROR(ProjInNonPiDialect)
ZS_SIMPLE_ERROR(BudgetExhausted)
ZS_SIMPLE_ERROR(NotFlat)
ZS_SIMPLE_ERROR(NotProductive)
ZS_SIMPLE_ERROR(PiDialectUnsupported)
ZS_SIMPLE_ERROR(RootHoistForbidden)
ZS_SIMPLE_ERROR(NoRedex)
ZS_SIMPLE_ERROR(InternalNonTermination)
ZS_SIMPLE_ERROR(CobasisMismatch)
ZS_SIMPLE_ERROR(DifferentK)
ZS_SIMPLE_ERROR(AlphabetMismatch)
ZS_SIMPLE_ERROR(NotZeroInvariant)
ZS_SIMPLE_ERROR(UnknownLabel)
ZS_SIMPLE_ERROR(UnknownAtom)
ZS_SIMPLE_ERROR(NotDecreasing)
ZS_SIMPLE_ERROR(FormatError)

#undef ZS_SIMPLE_ERROR

}  // namespace zs
