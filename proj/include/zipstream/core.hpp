#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "zipstream/errors.hpp"

namespace zs {

using Symbol = std::string;

enum class TermKind : std::uint8_t { Var, Cons, Zip, Proj, Tl };

struct TermNode;
// Terms are hash-consed: two structurally equal terms are the same pointer.
using Term = const TermNode*;

struct TermNode {
  TermKind kind;
  std::string name;         // variable name (Var) or head symbol (Cons)
  std::vector<Term> args;   // Cons: {tail}; Zip: arguments; Proj, Tl: {operand}
  std::uint64_t i = 0;      // Proj index
  std::uint64_t k = 0;      // Proj modulus, Zip arity
  std::size_t hash = 0;
  std::uint64_t id = 0;     // creation order, stable within a process

  bool is_var() const { return kind == TermKind::Var; }
  bool is_cons() const { return kind == TermKind::Cons; }
  bool is_zip() const { return kind == TermKind::Zip; }
  bool is_proj() const { return kind == TermKind::Proj; }
  bool is_tl() const { return kind == TermKind::Tl; }
  Term tail() const { return args[0]; }
};

Term mk_var(std::string_view name);
Term mk_cons(std::string_view sym, Term tail);
Term mk_cons(const std::vector<Symbol>& prefix, Term tail);
Term mk_zip(std::vector<Term> args);
Term mk_proj(std::uint64_t i, std::uint64_t k, Term t);
Term mk_tl(Term t);

// Number of interned terms; used by tests to observe sharing.
std::size_t interned_term_count();

// Strip a cons prefix: returns the symbols and the remaining term.
std::pair<std::vector<Symbol>, Term> split_prefix(Term t);

// Replace every occurrence of variable `from` by term `to`.
Term substitute(Term t, std::string_view from, Term to);
bool occurs(Term t, std::string_view var);
void collect_vars(Term t, std::vector<std::string>& out);
bool contains_kind(Term t, TermKind kind);
std::string print_term(Term t);

enum class DialectKind { ZipK, ZipMix, ZipPi };

struct Dialect {
  DialectKind kind = DialectKind::ZipK;
  std::uint64_t k = 2;  // meaningful for ZipK only
  bool operator==(const Dialect&) const = default;
};

std::string dialect_name(const Dialect& d);

struct Equation {
  std::string var;
  Term rhs;
  bool operator==(const Equation&) const = default;
};

class ZipSpec {
 public:
  std::vector<Symbol> alphabet;  // declaration order (or first-occurrence order when inferred)
  bool alphabet_declared = false;
  std::string root;
  Dialect dialect;

  const std::vector<Equation>& equations() const { return eqs_; }
  bool has(std::string_view var) const;
  Term rhs(std::string_view var) const;
  std::size_t index_of(std::string_view var) const;
  void add(std::string var, Term rhs);
  void set(std::string_view var, Term rhs);
  void remove(std::string_view var);
  std::vector<std::string> vars() const;
  std::size_t size() const { return eqs_.size(); }

  // Dialect implied by the terms (projections, zip arities).
  Dialect inferred_dialect() const;
  // Recompute the alphabet from cons heads unless it was declared, and the dialect from the terms.
  void refresh();
  std::string fresh_name(const std::string& base) const;

  bool operator==(const ZipSpec& o) const {
    return alphabet == o.alphabet && alphabet_declared == o.alphabet_declared && root == o.root &&
           dialect == o.dialect && eqs_ == o.eqs_;
  }

 private:
  std::vector<Equation> eqs_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ParseOptions {
  // When set, a projection in the text raises ProjInNonPiDialect.
  bool forbid_proj = false;
};

ZipSpec parse_spec(std::string_view text, const ParseOptions& opts = {});
ZipSpec load_spec(const std::string& path, const ParseOptions& opts = {});
std::string print_spec(const ZipSpec& s);

struct Diagnostic {
  enum class Kind { UnreachableVariable, UndefinedVariable, DialectViolation, AlphabetInconsistency, ZeroArity };
  Kind kind;
  std::string message;
};

std::vector<Diagnostic> validate(const ZipSpec& s);

// Sorted, distinct zip arities occurring in s.
std::vector<std::uint64_t> zip_arities(const ZipSpec& s);

}  // namespace zs
