#include "zipstream/transform.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "zipstream/analysis.hpp"
#include "zipstream/graphs.hpp"

namespace zs {

ZipSpec ensure_free_root(const ZipSpec& s) {
  bool used = std::any_of(s.equations().begin(), s.equations().end(),
                          [&](const Equation& e) { return occurs(e.rhs, s.root); });
  if (!used) return s;
  ZipSpec out;
  out.alphabet = s.alphabet;
  out.alphabet_declared = s.alphabet_declared;
  std::string fresh = s.fresh_name(s.root + "'");
  out.add(fresh, mk_var(s.root));
  for (const auto& e : s.equations()) out.add(e.var, e.rhs);
  out.root = fresh;
  out.dialect = s.dialect;
  return out;
}

namespace {

// Shortest word whose repetition equals w.
std::vector<Symbol> primitive_root(const std::vector<Symbol>& w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (std::size_t j = p; j < n && ok; ++j) ok = w[j] == w[j - p];
    if (ok) return {w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p)};
  }
  return w;
}

}  // namespace

ZipSpec periodic_to_zipk(const std::vector<Symbol>& u, std::uint64_t k, const std::string& base) {
  if (u.empty()) throw Error("periodic word must be non-empty");
  if (k < 2) throw ArityZero("periodic zip arity must be at least 2");
  ObsGraph g;
  g.cobasis = Cobasis::N;
  g.k = k;
  std::map<std::vector<Symbol>, std::size_t> id;
  std::vector<std::vector<Symbol>> words;
  auto node = [&](const std::vector<Symbol>& w) {
    auto r = primitive_root(w);
    auto [it, fresh] = id.emplace(r, words.size());
    if (fresh) {
      words.push_back(r);
      std::string name;
      for (const auto& c : r) name += c;
      g.add_node(r[0], "(" + name + ")^w", k);
    }
    return it->second;
  };
  g.root = node(u);
  for (std::size_t v = 0; v < words.size(); ++v) {
    const auto w = words[v];
    const std::size_t p = w.size();
    for (std::uint64_t i = 0; i < k; ++i) {
      std::vector<Symbol> d(p);
      for (std::size_t n = 0; n < p; ++n) d[n] = w[(k * n + i) % p];
      g.succ[v][i] = node(d);
    }
  }
  return ngraph_to_spec(g, base);
}

bool is_flat(const ZipSpec& s) {
  for (const auto& e : s.equations()) {
    auto [pre, rest] = split_prefix(e.rhs);
    if (!rest->is_zip() || rest->k < 2) return false;
    for (Term a : rest->args)
      if (!a->is_var()) return false;
  }
  return true;
}

std::size_t max_prefix(const ZipSpec& s) {
  std::size_t m = 0;
  for (const auto& e : s.equations()) m = std::max(m, split_prefix(e.rhs).first.size());
  return m;
}

namespace {

Term drop_unary_zips(Term t) {
  switch (t->kind) {
    case TermKind::Var:
      return t;
    case TermKind::Cons:
      return mk_cons(t->name, drop_unary_zips(t->tail()));
    case TermKind::Zip: {
      if (t->k == 1) return drop_unary_zips(t->args[0]);
      std::vector<Term> args;
      for (Term a : t->args) args.push_back(drop_unary_zips(a));
      return mk_zip(std::move(args));
    }
    case TermKind::Proj:
      return mk_proj(t->i, t->k, drop_unary_zips(t->tail()));
    case TermKind::Tl:
      return mk_tl(drop_unary_zips(t->tail()));
  }
  return t;
}

ZipSpec with_metadata_of(const ZipSpec& src, ZipSpec out) {
  out.alphabet = src.alphabet;
  out.alphabet_declared = src.alphabet_declared;
  out.root = src.root;
  out.refresh();
  out.alphabet = src.alphabet;
  out.alphabet_declared = src.alphabet_declared;
  return out;
}

// Variables on cycles of X -> Y where rhs(X) = c1:...:cm:Y, each with its period word.
std::vector<std::pair<std::string, std::vector<Symbol>>> zip_free_cycles(const ZipSpec& s) {
  std::unordered_map<std::string, std::pair<std::vector<Symbol>, std::string>> next;
  for (const auto& e : s.equations()) {
    auto [pre, rest] = split_prefix(e.rhs);
    if (rest->is_var()) next[e.var] = {pre, rest->name};
  }
  std::vector<std::pair<std::string, std::vector<Symbol>>> out;
  for (const auto& e : s.equations()) {
    if (!next.count(e.var)) continue;
    // e.var lies on a cycle iff following tails returns to it.
    std::vector<Symbol> word;
    std::string v = e.var;
    bool cyclic = false;
    for (std::size_t hops = 0; hops <= s.size() && next.count(v); ++hops) {
      const auto& [pre, to] = next[v];
      word.insert(word.end(), pre.begin(), pre.end());
      v = to;
      if (v == e.var) {
        cyclic = true;
        break;
      }
    }
    if (cyclic) {
      if (word.empty()) throw NotProductive("zip-free cycle without a guard through " + e.var);
      out.emplace_back(e.var, word);
    }
  }
  return out;
}

std::uint64_t periodic_arity(const ZipSpec& s) {
  auto ar = zip_arities(s);
  ar.erase(std::remove(ar.begin(), ar.end(), 1), ar.end());
  if (s.dialect.kind == DialectKind::ZipK && s.dialect.k >= 2) return s.dialect.k;
  return ar.empty() ? 2 : ar.front();
}

}  // namespace

ZipSpec eliminate_unary_zips(const ZipSpec& s) {
  ZipSpec out = s;
  for (const auto& e : s.equations()) out.set(e.var, drop_unary_zips(e.rhs));
  return with_metadata_of(s, out);
}

ZipSpec prune_unreachable(const ZipSpec& s) {
  std::vector<std::string> seen{s.root};
  std::unordered_set<std::string> mark{s.root};
  for (std::size_t j = 0; j < seen.size(); ++j) {
    std::vector<std::string> vs;
    collect_vars(s.rhs(seen[j]), vs);
    for (auto& v : vs)
      if (mark.insert(v).second) seen.push_back(v);
  }
  ZipSpec out;
  for (const auto& e : s.equations())
    if (mark.count(e.var)) out.add(e.var, e.rhs);
  return with_metadata_of(s, out);
}

ZipSpec flatten(const ZipSpec& input) {
  for (const auto& e : input.equations())
    if (contains_kind(e.rhs, TermKind::Proj) || contains_kind(e.rhs, TermKind::Tl))
      throw PiDialectUnsupported("flatten needs a projection-free specification");
  if (!is_productive(input)) throw NotProductive("flatten needs a productive specification");

  const std::uint64_t pk = periodic_arity(input);
  ZipSpec s = eliminate_unary_zips(input);

  // Zip-free cycles denote periodic streams; each such variable gets its own zip-k definition.
  for (const auto& [var, word] : zip_free_cycles(s)) {
    std::string base = var + "_p";
    for (std::size_t n = 1;; ++n) {
      bool clash = false;
      ZipSpec probe = periodic_to_zipk(word, pk, base);
      for (const auto& pv : probe.vars())
        if (pv != probe.root && s.has(pv)) clash = true;
      if (!clash) break;
      base = var + "_p" + std::to_string(n);
    }
    ZipSpec per = periodic_to_zipk(word, pk, base);
    Term self = mk_var(var);
    for (const auto& pe : per.equations()) {
      Term rhs = substitute(pe.rhs, per.root, self);
      if (pe.var == per.root)
        s.set(var, rhs);
      else
        s.add(pe.var, rhs);
    }
  }

  // Name non-variable zip arguments and unfold equations X = c1:...:cm:Y until every rhs is c:zip(vars).
  const std::size_t bound = (s.size() + 1) * (max_prefix(s) + 2) * 4 + 64;
  std::unordered_map<std::string, std::size_t> unfolds;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const std::string var = s.equations()[j].var;
      Term rhs = s.equations()[j].rhs;
      auto [pre, rest] = split_prefix(rhs);
      if (rest->is_var()) {
        if (++unfolds[var] > bound) throw InternalNonTermination("unfolding did not terminate at " + var);
        s.set(var, mk_cons(pre, s.rhs(rest->name)));
        changed = true;
        continue;
      }
      std::vector<Term> args = rest->args;
      bool extracted = false;
      for (std::size_t a = 0; a < args.size(); ++a) {
        if (args[a]->is_var()) continue;
        std::string name = s.fresh_name(var + "_" + std::to_string(a));
        s.add(name, args[a]);
        args[a] = mk_var(name);
        extracted = true;
      }
      if (extracted) {
        s.set(var, mk_cons(pre, mk_zip(std::move(args))));
        changed = true;
      }
    }
  }
  return prune_unreachable(s);
}

}  // namespace zs
