#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zipstream/core.hpp"
#include "zipstream/graphs.hpp"

namespace zs {

// A k-DFAO (uniform base) or a mix-DFAO (base beta(q) = delta[q].size() per state).
// Digit words are read least significant digit first.
struct Automaton {
  bool mixed = false;
  std::uint64_t k = 2;  // uniform base when !mixed
  std::vector<Symbol> out;
  std::vector<std::vector<std::size_t>> delta;
  std::vector<std::string> names;
  std::size_t initial = 0;

  std::size_t size() const { return out.size(); }
  std::uint64_t base(std::size_t q) const { return delta[q].size(); }
  std::size_t add_state(Symbol o, std::string name, std::size_t base);
  void check() const;  // throws FormatError
};

// Most significant digit first; zero is the empty word.
using DigitWord = std::vector<std::uint64_t>;

DigitWord digits_base_k(std::uint64_t n, std::uint64_t k);
// Variadic numeration of n from state q (default: the initial state), bases taken from P.
DigitWord repr_mix(std::uint64_t n, const Automaton& P, std::optional<std::size_t> q = std::nullopt);
// Inverse of repr_mix: folds the digits back into a number.
std::uint64_t value_mix(const DigitWord& w, const Automaton& P, std::optional<std::size_t> q = std::nullopt);
std::string digits_to_string(const DigitWord& w);

std::size_t run_word(const Automaton& A, std::size_t q, const DigitWord& w);
Symbol generate(const Automaton& A, std::size_t q, std::uint64_t n);
Symbol generate(const Automaton& A, std::uint64_t n);
Symbol generate_mix(const Automaton& A, std::size_t q, std::uint64_t n);

// Same transitions, outputs replaced by the base of each state.
Automaton base_determiner(const Automaton& A);
// A's (base, transition) structure is bisimilar to P's from the initial states.
bool compatible(const Automaton& A, const Automaton& P);

bool is_zero_invariant(const Automaton& A, std::size_t* offender = nullptr);
// Product with an output override: states (q, plain) and (q, c). Reachable part only.
Automaton make_zero_invariant(const Automaton& A);

ObsGraph dfao_to_graph(const Automaton& A);
Automaton graph_to_dfao(const ObsGraph& g);

// Base-2 root dispatching even positions to A and odd positions to B.
Automaton zip_for_mix_demo(const Automaton& A, const Automaton& B);

}  // namespace zs
