#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zipstream/core.hpp"
#include "zipstream/semantics.hpp"

namespace zs {

enum class Cobasis { N, O, Mix };
std::string cobasis_name(Cobasis c);

// Rooted, edge-ordered observation graph. N(k): successors are proj_0..proj_{k-1};
// O(k): proj_1..proj_k; Mix: per-node arity, successors proj_0..proj_{a-1}.
struct ObsGraph {
  Cobasis cobasis = Cobasis::N;
  std::uint64_t k = 2;  // unused for Mix
  std::size_t root = 0;
  std::vector<Symbol> out;
  std::vector<std::vector<std::size_t>> succ;
  std::vector<std::string> names;

  std::size_t size() const { return out.size(); }
  std::size_t arity(std::size_t v) const { return succ[v].size(); }
  std::size_t add_node(Symbol o, std::string name, std::size_t arity);
  // Throws FormatError when arities or edge targets are inconsistent with the cobasis.
  void check() const;
};

// Observation graph of a graph-ready spec (zip-guarded, projection-free, arities >= 2).
// Nodes are normal forms of iterated projections of the root, named by their printed term.
ObsGraph build_ngraph(const ZipSpec& s, RewriteBudget b = {});

Symbol interpret_ngraph(const ObsGraph& g, std::uint64_t n);
Symbol interpret_ograph(const ObsGraph& g, std::uint64_t n);
Symbol interpret(const ObsGraph& g, std::uint64_t n);
Prefix graph_prefix(const ObsGraph& g, std::size_t n);

// Bisimulation collapse; keeps only nodes reachable from the root, in breadth-first order.
ObsGraph minimize(const ObsGraph& g);
std::vector<std::size_t> reachable(const ObsGraph& g);

struct BisimWitness {
  bool bisimilar = false;
  std::vector<std::pair<std::size_t, std::size_t>> relation;  // on success
  std::optional<std::uint64_t> index;                           // on failure, when one exists
  Symbol left, right;                                           // outputs at `index`
  std::string reason;
  std::uint64_t pairs_examined = 0;
};

BisimWitness bisimilar(const ObsGraph& g1, const ObsGraph& g2);

struct EquivalenceReport {
  bool equivalent = false;
  std::size_t solutions1 = 0, solutions2 = 0;
  std::vector<BisimWitness> witnesses;   // one per compared solution pair that decided a match
  ObsGraph graph1, graph2;               // graphs of the first solutions, as built
  std::uint64_t pairs_examined = 0;
  std::uint64_t nodes_built = 0;
  std::string note;
};

// Both specs zip-k with the same k over the same alphabet. Unproductive specs are
// compared through their solution sets.
EquivalenceReport equivalent(const ZipSpec& s1, const ZipSpec& s2, RewriteBudget b = {});

// Same stream under the O_k cobasis; keeps all 2|S| states (s and tl(s) for each s).
ObsGraph ngraph_to_ograph(const ObsGraph& g);

// X_i = a_i : zip_k(X_{i,1}, ..., X_{i,k}) per reachable node.
ZipSpec ograph_to_spec(const ObsGraph& g, const std::string& base = "X");

// Paired equations X_i = a_i : X_i', X_i' = zip(X_{f(i,1)}, ..., X_{f(i,k-1)}, X'_{f(i,0)}).
// Requires out(succ(s)[0]) = out(s) for every node.
ZipSpec ngraph_to_spec(const ObsGraph& g, const std::string& base = "X");
bool is_zero_invariant(const ObsGraph& g, std::size_t* offender = nullptr);

// The k-kernel as the minimized graph: each node is one kernel element.
ObsGraph kernel(const ObsGraph& g);

struct PrefixComparison {
  bool equal = true;
  std::optional<std::uint64_t> index;
  Symbol left, right;
};

// First n symbols of the root stream; uses index arithmetic for specs with projections.
Prefix stream_prefix(const ZipSpec& s, std::size_t n, RewriteBudget b = {});
PrefixComparison prefix_compare(const Prefix& a, const Prefix& b);
PrefixComparison prefix_compare(const ZipSpec& a, const ZipSpec& b, std::size_t n, RewriteBudget budget = {});
PrefixComparison prefix_compare(const ZipSpec& a, const ObsGraph& b, std::size_t n, RewriteBudget budget = {});
PrefixComparison prefix_compare(const ObsGraph& a, const ObsGraph& b, std::size_t n);

}  // namespace zs
