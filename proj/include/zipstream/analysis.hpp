#pragma once

#include <string>
#include <vector>

#include "zipstream/core.hpp"
#include "zipstream/semantics.hpp"

namespace zs {

struct LeftmostCycle {
  std::vector<std::string> vars;  // variables in cycle order, starting at the first-declared one
  std::vector<Term> path;         // every term on the leftmost path, closing back at vars.front()
  bool guarded = false;
};

struct CycleReport {
  std::vector<LeftmostCycle> cycles;
  std::vector<std::string> representatives;  // one per unguarded cycle, in declaration order
};

// Each variable has exactly one leftmost path (equation, cons tails, first zip arguments)
// ending at a variable, so the left-step relation on variables is a function.
CycleReport leftmost_cycles(const ZipSpec& s);

// Every leftmost cycle carries a guard. For zip-pi input, a bounded evaluation stands in.
bool is_productive(const ZipSpec& s, RewriteBudget b = {});

struct ProductivityReport {
  bool productive = false;
  bool decided = true;  // false for zip-pi, where only a bounded evaluation was run
  std::size_t probed = 0;
  std::string note;
};
ProductivityReport check_productivity(const ZipSpec& s, RewriteBudget b = {}, std::size_t probe = 64);

struct EvolveChoice {
  enum class Kind { Hoist, ZipRewrite };
  Kind kind;
  std::string var;
};

// Hoist: X = a:t becomes X = t with every occurrence of X replaced by a:X.
// ZipRewrite: one contraction zip(a:s0, s1, ...) -> a : zip(s1, ..., s0) in rhs(X), leftmost-outermost.
ZipSpec evolve_step(const ZipSpec& s, const EvolveChoice& c);

// Productive spec with the representatives' first symbols fixed to `choice` (one symbol per representative).
ZipSpec solve_with(const ZipSpec& s, const std::vector<Symbol>& choice);

// All |alphabet|^m productive specs whose roots range over the solutions of s.
// Ordered lexicographically in alphabet order.
std::vector<ZipSpec> solve_all(const ZipSpec& s);

}  // namespace zs
