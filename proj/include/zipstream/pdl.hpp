#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zipstream/graphs.hpp"

namespace zs {

enum class ProgKind : std::uint8_t { Atom, Seq, Union, Star };

struct PdlProgNode;
using PdlProgram = const PdlProgNode*;  // interned
struct PdlProgNode {
  ProgKind kind;
  std::string label;              // Atom
  std::vector<PdlProgram> args;   // Seq/Union: two; Star: one
  std::uint64_t id = 0;
};

PdlProgram prog_atom(std::string_view label);
PdlProgram prog_seq(PdlProgram a, PdlProgram b);
PdlProgram prog_union(PdlProgram a, PdlProgram b);
PdlProgram prog_star(PdlProgram a);

enum class FormKind : std::uint8_t { True, False, Atom, Not, And, Or, Implies, Iff, Box, Dia };

struct PdlFormNode;
using PdlFormula = const PdlFormNode*;  // interned: structurally equal formulas share one node
struct PdlFormNode {
  FormKind kind;
  std::string atom;               // Atom
  PdlProgram prog = nullptr;      // Box, Dia
  std::vector<PdlFormula> args;   // And/Or: sorted by id, deduplicated, size >= 2
  std::uint64_t id = 0;
};

PdlFormula pdl_true();
PdlFormula pdl_false();
PdlFormula pdl_atom(std::string_view a);
PdlFormula pdl_not(PdlFormula f);
// n-ary; nested operands of the same kind are flattened, sorted and deduplicated.
PdlFormula pdl_and(std::vector<PdlFormula> fs);
PdlFormula pdl_or(std::vector<PdlFormula> fs);
PdlFormula pdl_implies(PdlFormula a, PdlFormula b);
PdlFormula pdl_iff(PdlFormula a, PdlFormula b);
PdlFormula pdl_box(PdlProgram p, PdlFormula f);
PdlFormula pdl_dia(PdlProgram p, PdlFormula f);

std::string print_program(PdlProgram p);
std::string print_formula(PdlFormula f);
PdlFormula parse_formula(std::string_view text);
PdlProgram parse_program(std::string_view text);
// Number of distinct subformulas (DAG size).
std::size_t formula_dag_size(PdlFormula f);

struct PdlModel {
  std::vector<std::string> states;
  std::map<Symbol, std::vector<bool>> atoms;
  std::vector<std::string> labels;  // declaration order
  std::map<std::string, std::vector<std::vector<std::size_t>>> rels;  // label -> successor lists

  std::size_t size() const { return states.size(); }
  std::size_t state_index(std::string_view name) const;  // throws Error
};

// Labels: even/odd for k = 2, else p0..p{k-1}; Mix graphs get p_i only where arity > i.
// Extra atoms are declared with empty extension.
PdlModel model_of_graph(const ObsGraph& g, const std::vector<Symbol>& extra_atoms = {});
std::vector<std::string> edge_labels(std::size_t k);

std::vector<bool> eval(const PdlModel& m, PdlFormula f);

PdlFormula canonical_phi(const PdlModel& m, std::size_t a, std::size_t h);
// Smallest h at which the partition by canonical_phi stops refining.
std::size_t stable_height(const PdlModel& m);
PdlFormula characterize(const PdlModel& m, std::size_t x);

}  // namespace zs
