#include "zipstream/graphs.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "zipstream/analysis.hpp"
#include "zipstream/transform.hpp"

namespace zs {

std::string cobasis_name(Cobasis c) {
  switch (c) {
    case Cobasis::N: return "n";
    case Cobasis::O: return "o";
    case Cobasis::Mix: return "mix";
  }
  return "?";
}

std::size_t ObsGraph::add_node(Symbol o, std::string name, std::size_t arity) {
  out.push_back(std::move(o));
  names.push_back(std::move(name));
  succ.emplace_back(arity, 0);
  return out.size() - 1;
}

void ObsGraph::check() const {
  if (out.empty()) throw FormatError("graph has no nodes");
  if (succ.size() != out.size() || names.size() != out.size()) throw FormatError("graph tables have different lengths");
  if (root >= size()) throw FormatError("root out of range");
  for (std::size_t v = 0; v < size(); ++v) {
    if (cobasis != Cobasis::Mix && succ[v].size() != k)
      throw FormatError("node " + names[v] + " has " + std::to_string(succ[v].size()) + " successors, expected " + std::to_string(k));
    if (cobasis == Cobasis::Mix && succ[v].size() < 2) throw FormatError("mix node " + names[v] + " has arity below 2");
    for (auto t : succ[v])
      if (t >= size()) throw FormatError("edge target out of range at node " + names[v]);
  }
  if (cobasis != Cobasis::Mix && k < 2) throw FormatError("graph arity below 2");
}

ObsGraph build_ngraph(const ZipSpec& s, RewriteBudget b) {
  std::string why;
  if (!is_graph_ready(s, &why)) throw NotFlat(why);
  if (!is_productive(s, b)) throw NotProductive("observation graphs need a productive specification");
  Normalizer nz(s, b);
  ObsGraph g;
  auto d = s.inferred_dialect();
  if (d.kind == DialectKind::ZipK) {
    g.cobasis = Cobasis::N;
    g.k = d.k;
  } else {
    g.cobasis = Cobasis::Mix;
    g.k = 0;
  }
  std::unordered_map<Term, std::size_t> id;
  std::vector<Term> terms;
  auto node = [&](Term t) {
    auto [it, fresh] = id.emplace(t, terms.size());
    if (fresh) {
      terms.push_back(t);
      g.add_node(nz.head(t), print_term(t), nz.arity(t));
    }
    return it->second;
  };
  g.root = node(mk_var(s.root));
  for (std::size_t v = 0; v < terms.size(); ++v) {
    const std::uint64_t kt = g.succ[v].size();
    for (std::uint64_t i = 0; i < kt; ++i) {
      Term c = nz.proj(i, kt, terms[v]);
      if (contains_kind(c, TermKind::Proj)) throw NotFlat("projection of " + print_term(terms[v]) + " is stuck at " + print_term(c));
      std::size_t t = node(c);
      g.succ[v][i] = t;
    }
  }
  return g;
}

Symbol interpret_ngraph(const ObsGraph& g, std::uint64_t n) {
  std::size_t v = g.root;
  while (n > 0) {
    const std::uint64_t a = g.arity(v);
    v = g.succ[v][n % a];
    n /= a;
  }
  return g.out[v];
}

Symbol interpret_ograph(const ObsGraph& g, std::uint64_t n) {
  std::size_t v = g.root;
  const std::uint64_t k = g.k;
  while (n > 0) {
    std::uint64_t i = (n - 1) % k + 1;
    v = g.succ[v][i - 1];
    n = (n - i) / k;
  }
  return g.out[v];
}

Symbol interpret(const ObsGraph& g, std::uint64_t n) {
  return g.cobasis == Cobasis::O ? interpret_ograph(g, n) : interpret_ngraph(g, n);
}

Prefix graph_prefix(const ObsGraph& g, std::size_t n) {
  Prefix p;
  p.reserve(n);
  for (std::size_t j = 0; j < n; ++j) p.push_back(interpret(g, j));
  return p;
}

std::vector<std::size_t> reachable(const ObsGraph& g) {
  std::vector<std::size_t> order{g.root};
  std::vector<bool> seen(g.size(), false);
  seen[g.root] = true;
  for (std::size_t j = 0; j < order.size(); ++j)
    for (auto t : g.succ[order[j]])
      if (!seen[t]) {
        seen[t] = true;
        order.push_back(t);
      }
  return order;
}

ObsGraph minimize(const ObsGraph& g) {
  // Moore refinement: start from (output, arity), split by successor classes until stable.
  const std::size_t n = g.size();
  std::vector<std::size_t> cls(n);
  std::size_t count = 0;
  {
    std::map<std::pair<Symbol, std::size_t>, std::size_t> ids;
    for (std::size_t v = 0; v < n; ++v) {
      auto [it, fresh] = ids.emplace(std::make_pair(g.out[v], g.arity(v)), ids.size());
      cls[v] = it->second;
    }
    count = ids.size();
  }
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::size_t> sig{cls[v]};
      for (auto t : g.succ[v]) sig.push_back(cls[t]);
      auto [it, fresh] = ids.emplace(std::move(sig), ids.size());
      next[v] = it->second;
    }
    cls = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  ObsGraph m;
  m.cobasis = g.cobasis;
  m.k = g.k;
  std::unordered_map<std::size_t, std::size_t> class_node;
  std::vector<std::size_t> rep;
  auto node_of = [&](std::size_t v) {
    auto [it, fresh] = class_node.emplace(cls[v], rep.size());
    if (fresh) {
      rep.push_back(v);
      m.add_node(g.out[v], g.names[v], g.arity(v));
    }
    return it->second;
  };
  m.root = node_of(g.root);
  for (std::size_t j = 0; j < rep.size(); ++j) {
    std::size_t v = rep[j];
    for (std::size_t i = 0; i < g.arity(v); ++i) {
      std::size_t t = node_of(g.succ[v][i]);
      m.succ[j][i] = t;
    }
  }
  return m;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

void check_same_cobasis(const ObsGraph& g1, const ObsGraph& g2) {
  if (g1.cobasis != g2.cobasis)
    throw CobasisMismatch("cannot compare a " + cobasis_name(g1.cobasis) + " graph with a " + cobasis_name(g2.cobasis) + " graph");
  if (g1.cobasis != Cobasis::Mix && g1.k != g2.k)
    throw CobasisMismatch("graph arities differ: " + std::to_string(g1.k) + " and " + std::to_string(g2.k));
}

// Position reached by following `edges` from the root, or nothing on overflow.
std::optional<std::uint64_t> position_of_path(const ObsGraph& g, const std::vector<std::size_t>& edges) {
  using U = unsigned __int128;
  U pos = 0, scale = 1;
  std::size_t v = g.root;
  const U limit = std::numeric_limits<std::uint64_t>::max();
  for (auto e : edges) {
    U a = g.arity(v);
    U digit = g.cobasis == Cobasis::O ? e + 1 : e;
    pos += digit * scale;
    scale *= a;
    if (pos > limit || scale > limit) return std::nullopt;
    v = g.succ[v][e];
  }
  return static_cast<std::uint64_t>(pos);
}

}  // namespace

BisimWitness bisimilar(const ObsGraph& g1, const ObsGraph& g2) {
  check_same_cobasis(g1, g2);
  const std::size_t off = g1.size();
  UnionFind uf(off + g2.size());
  struct Item {
    std::size_t a, b;
    std::size_t parent;  // index into items, npos for the root pair
    std::size_t edge;
  };
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::vector<Item> items{{g1.root, g2.root, npos, 0}};
  uf.unite(g1.root, off + g2.root);
  BisimWitness w;
  for (std::size_t j = 0; j < items.size(); ++j) {
    const auto [a, b, parent, edge] = items[j];
    ++w.pairs_examined;
    bool out_differs = g1.out[a] != g2.out[b];
    bool arity_differs = g1.arity(a) != g2.arity(b);
    if (out_differs || arity_differs) {
      std::vector<std::size_t> path;
      for (std::size_t p = j; items[p].parent != npos; p = items[p].parent) path.push_back(items[p].edge);
      std::reverse(path.begin(), path.end());
      if (arity_differs) {
        w.reason = "nodes " + g1.names[a] + " and " + g2.names[b] + " have arities " + std::to_string(g1.arity(a)) + " and " +
                   std::to_string(g2.arity(b));
        return w;
      }
      w.reason = "nodes " + g1.names[a] + " and " + g2.names[b] + " output " + g1.out[a] + " and " + g2.out[b];
      auto pos = position_of_path(g1, path);
      if (pos && interpret(g1, *pos) != interpret(g2, *pos)) {
        w.index = pos;
      } else {
        // Graphs that are not zero-consistent can disagree on a node that no position reaches by this path.
        for (std::uint64_t n = 0; n < (1u << 16); ++n)
          if (interpret(g1, n) != interpret(g2, n)) {
            w.index = n;
            break;
          }
      }
      if (w.index) {
        w.left = interpret(g1, *w.index);
        w.right = interpret(g2, *w.index);
      }
      return w;
    }
    for (std::size_t i = 0; i < g1.arity(a); ++i) {
      std::size_t x = g1.succ[a][i], y = g2.succ[b][i];
      if (uf.unite(x, off + y)) items.push_back({x, y, j, i});
    }
  }
  w.bisimilar = true;
  std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> classes;
  for (std::size_t v = 0; v < g1.size(); ++v) classes[uf.find(v)].first.push_back(v);
  for (std::size_t v = 0; v < g2.size(); ++v) classes[uf.find(off + v)].second.push_back(v);
  for (const auto& [c, members] : classes)
    for (auto x : members.first)
      for (auto y : members.second) w.relation.emplace_back(x, y);
  std::sort(w.relation.begin(), w.relation.end());
  return w;
}

namespace {

std::vector<Symbol> sorted_alphabet(const ZipSpec& s) {
  auto a = s.alphabet;
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

ObsGraph graph_of_solution(const ZipSpec& s, RewriteBudget b) {
  if (is_graph_ready(s)) return build_ngraph(s, b);
  return build_ngraph(flatten(s), b);
}

}  // namespace

EquivalenceReport equivalent(const ZipSpec& s1, const ZipSpec& s2, RewriteBudget b) {
  auto kind_of = [](const ZipSpec& s) {
    for (const auto& e : s.equations())
      if (contains_kind(e.rhs, TermKind::Proj))
        throw PiDialectUnsupported("equivalence with projections is undecidable; use a prefix comparison");
    return s.inferred_dialect();
  };
  Dialect d1 = kind_of(s1), d2 = kind_of(s2);
  if (d1.kind != DialectKind::ZipK || d2.kind != DialectKind::ZipK)
    throw DifferentK("equivalence is decided for zip-k specifications only; use a prefix comparison for zip-mix");
  if (d1.k != d2.k) throw DifferentK("zip arities differ: " + std::to_string(d1.k) + " and " + std::to_string(d2.k));
  if (sorted_alphabet(s1) != sorted_alphabet(s2)) throw AlphabetMismatch("the specifications use different alphabets");

  EquivalenceReport rep;
  auto sols1 = solve_all(s1), sols2 = solve_all(s2);
  rep.solutions1 = sols1.size();
  rep.solutions2 = sols2.size();
  std::vector<ObsGraph> g1, g2, m1, m2;
  for (const auto& s : sols1) {
    g1.push_back(graph_of_solution(s, b));
    rep.nodes_built += g1.back().size();
    m1.push_back(minimize(g1.back()));
  }
  for (const auto& s : sols2) {
    g2.push_back(graph_of_solution(s, b));
    rep.nodes_built += g2.back().size();
    m2.push_back(minimize(g2.back()));
  }
  if (!g1.empty()) rep.graph1 = g1.front();
  if (!g2.empty()) rep.graph2 = g2.front();

  if (g1.size() == 1 && g2.size() == 1) {
    auto w = bisimilar(g1[0], g2[0]);
    rep.pairs_examined += w.pairs_examined;
    rep.equivalent = w.bisimilar;
    rep.witnesses.push_back(std::move(w));
    return rep;
  }
  // Solution sets are compared up to bisimilarity of their minimized graphs.
  auto covers = [&](const std::vector<ObsGraph>& xs, const std::vector<ObsGraph>& ys, bool record) {
    for (const auto& x : xs) {
      bool found = false;
      BisimWitness last;
      for (const auto& y : ys) {
        auto w = bisimilar(x, y);
        rep.pairs_examined += w.pairs_examined;
        if (w.bisimilar) {
          found = true;
          if (record) rep.witnesses.push_back(std::move(w));
          break;
        }
        last = std::move(w);
      }
      if (!found) {
        rep.witnesses.push_back(std::move(last));
        return false;
      }
    }
    return true;
  };
  rep.equivalent = covers(m1, m2, true) && covers(m2, m1, false);
  if (!rep.equivalent) rep.note = "some solution of one specification is not a solution of the other";
  return rep;
}

ObsGraph ngraph_to_ograph(const ObsGraph& g) {
  if (g.cobasis != Cobasis::N) throw CobasisMismatch("conversion to O_k needs an N_k graph");
  const std::size_t n = g.size();
  const std::size_t k = g.k;
  ObsGraph o;
  o.cobasis = Cobasis::O;
  o.k = k;
  o.root = g.root;
  for (std::size_t s = 0; s < n; ++s) o.add_node(g.out[s], g.names[s], k);
  for (std::size_t s = 0; s < n; ++s) o.add_node(g.out[g.succ[s][1]], "tl(" + g.names[s] + ")", k);
  auto tl = [&](std::size_t s) { return n + s; };
  for (std::size_t s = 0; s < n; ++s) {
    // proj_i for i < k is an N-successor; proj_k(s) = tl(proj_0(s)).
    for (std::size_t i = 1; i < k; ++i) o.succ[s][i - 1] = g.succ[s][i];
    o.succ[s][k - 1] = tl(g.succ[s][0]);
    // proj_i(tl s) = proj_{i+1}(s) for i+1 < k; then tl(proj_0 s) and tl(proj_1 s).
    for (std::size_t i = 1; i + 1 < k; ++i) o.succ[tl(s)][i - 1] = g.succ[s][i + 1];
    o.succ[tl(s)][k - 2] = tl(g.succ[s][0]);
    o.succ[tl(s)][k - 1] = tl(g.succ[s][1]);
  }
  return o;
}

ZipSpec ograph_to_spec(const ObsGraph& g, const std::string& base) {
  if (g.cobasis != Cobasis::O) throw CobasisMismatch("expected an O_k graph");
  auto order = reachable(g);
  std::unordered_map<std::size_t, std::string> name;
  for (std::size_t j = 0; j < order.size(); ++j) name[order[j]] = base + std::to_string(j);
  ZipSpec s;
  for (auto v : order) {
    std::vector<Term> args;
    for (auto t : g.succ[v]) args.push_back(mk_var(name[t]));
    s.add(name[v], mk_cons(g.out[v], mk_zip(std::move(args))));
  }
  s.root = name[g.root];
  s.refresh();
  return s;
}

bool is_zero_invariant(const ObsGraph& g, std::size_t* offender) {
  for (auto v : reachable(g))
    if (g.out[g.succ[v][0]] != g.out[v]) {
      if (offender) *offender = v;
      return false;
    }
  return true;
}

ZipSpec ngraph_to_spec(const ObsGraph& g, const std::string& base) {
  if (g.cobasis == Cobasis::O) throw CobasisMismatch("expected an N_k or mix graph");
  std::size_t bad = 0;
  if (!is_zero_invariant(g, &bad))
    throw NotZeroInvariant("node " + g.names[bad] + " outputs " + g.out[bad] + " but its 0-successor outputs " +
                           g.out[g.succ[bad][0]]);
  auto order = reachable(g);
  std::unordered_map<std::size_t, std::string> name;
  for (std::size_t j = 0; j < order.size(); ++j) name[order[j]] = base + std::to_string(j);
  ZipSpec s;
  for (auto v : order) {
    std::vector<Term> args;
    for (std::size_t i = 1; i < g.arity(v); ++i) args.push_back(mk_var(name[g.succ[v][i]]));
    args.push_back(mk_var(name[g.succ[v][0]] + "'"));
    s.add(name[v], mk_cons(g.out[v], mk_var(name[v] + "'")));
    s.add(name[v] + "'", mk_zip(std::move(args)));
  }
  s.root = name[g.root];
  s.refresh();
  return s;
}

ObsGraph kernel(const ObsGraph& g) {
  if (g.cobasis == Cobasis::O) throw CobasisMismatch("the k-kernel is read from an N_k graph");
  return minimize(g);
}

Prefix stream_prefix(const ZipSpec& s, std::size_t n, RewriteBudget b) {
  bool has_proj = std::any_of(s.equations().begin(), s.equations().end(),
                              [](const Equation& e) { return contains_kind(e.rhs, TermKind::Proj); });
  if (has_proj) return StreamIndexer(s, b).prefix(n);
  return eval_prefix(s, n, b);
}

PrefixComparison prefix_compare(const Prefix& a, const Prefix& b) {
  PrefixComparison r;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t j = 0; j < n; ++j)
    if (a[j] != b[j]) {
      r.equal = false;
      r.index = j;
      r.left = a[j];
      r.right = b[j];
      return r;
    }
  return r;
}

PrefixComparison prefix_compare(const ZipSpec& a, const ZipSpec& b, std::size_t n, RewriteBudget budget) {
  return prefix_compare(stream_prefix(a, n, budget), stream_prefix(b, n, budget));
}

PrefixComparison prefix_compare(const ZipSpec& a, const ObsGraph& b, std::size_t n, RewriteBudget budget) {
  return prefix_compare(stream_prefix(a, n, budget), graph_prefix(b, n));
}

PrefixComparison prefix_compare(const ObsGraph& a, const ObsGraph& b, std::size_t n) {
  return prefix_compare(graph_prefix(a, n), graph_prefix(b, n));
}

}  // namespace zs
