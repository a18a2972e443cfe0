#pragma once

// Reference implementations written directly from the definitions. They share no code
// with the library beyond the data types, so agreement is evidence rather than tautology.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "zipstream/automata.hpp"
#include "zipstream/core.hpp"
#include "zipstream/fractran.hpp"
#include "zipstream/graphs.hpp"

#ifndef ZS_FIXTURE_DIR
#error "ZS_FIXTURE_DIR must be defined"
#endif

namespace oracle {

inline std::string fixture(const std::string& name) { return std::string(ZS_FIXTURE_DIR) + "/" + name; }

inline std::string thue_morse(std::uint64_t n) { return std::popcount(n) % 2 ? "1" : "0"; }

inline std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += x;
  return s;
}

// Kleene iteration over finite windows: every variable gets L cells, filled until nothing changes.
// Cells whose value depends on positions >= L (or on themselves) stay empty.
class NaiveStreams {
 public:
  NaiveStreams(const zs::ZipSpec& s, std::size_t L) : spec_(s), L_(L) {
    for (const auto& e : s.equations()) cells_[e.var].assign(L, std::nullopt);
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& e : s.equations())
        for (std::size_t n = 0; n < L; ++n) {
          if (cells_[e.var][n]) continue;
          auto v = at(e.rhs, n);
          if (v) {
            cells_[e.var][n] = v;
            changed = true;
          }
        }
    }
  }

  std::optional<std::string> at(zs::Term t, std::uint64_t n) const {
    using zs::TermKind;
    switch (t->kind) {
      case TermKind::Var: {
        const auto& c = cells_.at(t->name);
        return n < L_ ? c[n] : std::nullopt;
      }
      case TermKind::Cons:
        return n == 0 ? std::optional<std::string>(t->name) : at(t->args[0], n - 1);
      case TermKind::Zip:
        return at(t->args[n % t->k], n / t->k);
      case TermKind::Proj:
        return at(t->args[0], t->k * n + t->i);
      case TermKind::Tl:
        return at(t->args[0], n + 1);
    }
    return std::nullopt;
  }

  std::optional<std::string> root(std::uint64_t n) const { return cells_.at(spec_.root)[n]; }
  const std::vector<std::optional<std::string>>& var(const std::string& v) const { return cells_.at(v); }

 private:
  zs::ZipSpec spec_;
  std::size_t L_;
  std::map<std::string, std::vector<std::optional<std::string>>> cells_;
};

// Stream of a graph node read straight from the cobasis definitions.
inline std::string graph_at(const zs::ObsGraph& g, std::size_t v, std::uint64_t n) {
  while (n > 0) {
    if (g.cobasis == zs::Cobasis::O) {
      const std::uint64_t k = g.k;
      std::uint64_t i = (n - 1) % k;  // proj_{i+1}
      v = g.succ[v][i];
      n = (n - 1) / k;
    } else {
      const std::uint64_t a = g.succ[v].size();
      std::uint64_t i = n % a;
      v = g.succ[v][i];
      n /= a;
    }
  }
  return g.out[v];
}

inline std::string automaton_at(const zs::Automaton& a, std::uint64_t n) {
  // Digits least significant first, each in the base of the current state.
  std::size_t q = a.initial;
  while (n > 0) {
    std::uint64_t b = a.delta[q].size();
    q = a.delta[q][n % b];
    n /= b;
  }
  return a.out[q];
}

// Moore partition refinement on (output, arity, successor classes); returns class ids.
inline std::vector<std::size_t> moore_classes(const zs::ObsGraph& g) {
  std::vector<std::size_t> cls(g.size());
  {
    std::map<std::pair<std::string, std::size_t>, std::size_t> id;
    for (std::size_t v = 0; v < g.size(); ++v) cls[v] = id.emplace(std::make_pair(g.out[v], g.arity(v)), id.size()).first->second;
  }
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> id;
    std::vector<std::size_t> next(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
      std::vector<std::size_t> key{cls[v]};
      for (auto t : g.succ[v]) key.push_back(cls[t]);
      next[v] = id.emplace(key, id.size()).first->second;
    }
    std::size_t a = std::set<std::size_t>(cls.begin(), cls.end()).size();
    std::size_t b = std::set<std::size_t>(next.begin(), next.end()).size();
    cls = next;
    if (a == b) return cls;
  }
}

inline std::size_t reachable_count(const zs::ObsGraph& g) {
  std::set<std::size_t> seen{g.root};
  std::vector<std::size_t> todo{g.root};
  while (!todo.empty()) {
    auto v = todo.back();
    todo.pop_back();
    for (auto t : g.succ[v])
      if (seen.insert(t).second) todo.push_back(t);
  }
  return seen.size();
}

// Fractran with 128-bit arithmetic; nullopt on timeout or overflow risk.
struct SmallFraction {
  std::uint64_t p, q;
  std::optional<std::string> out;
};

inline std::optional<std::string> fractran_run(const std::vector<SmallFraction>& f, unsigned __int128 n, std::uint64_t max_steps) {
  for (std::uint64_t s = 0; s < max_steps; ++s) {
    bool fired = false;
    for (const auto& fr : f) {
      if ((n * fr.p) % fr.q != 0) continue;
      if (fr.out) return fr.out;
      n = n * fr.p / fr.q;
      fired = true;
      break;
    }
    if (!fired) return std::string("bot");
  }
  return std::nullopt;
}

inline std::vector<SmallFraction> small(const zs::FractranProgram& f) {
  std::vector<SmallFraction> out;
  for (const auto& fr : f.fractions) out.push_back({fr.p.convert_to<std::uint64_t>(), fr.q.convert_to<std::uint64_t>(), fr.out});
  return out;
}

// Distinct kernel elements proj_{i, k^p}(sigma), identified by their first `width` symbols.
template <class Stream>
std::size_t kernel_size(Stream sigma, std::uint64_t k, std::size_t depth, std::size_t width = 64) {
  std::set<std::vector<std::string>> seen;
  std::uint64_t kp = 1;
  for (std::size_t p = 0; p <= depth; ++p, kp *= k)
    for (std::uint64_t i = 0; i < kp; ++i) {
      std::vector<std::string> w;
      for (std::uint64_t n = 0; n < width; ++n) w.push_back(sigma(kp * n + i));
      seen.insert(w);
    }
  return seen.size();
}

// Solving hoists representatives (V becomes a:V), so a solution variable may denote a tail of the
// original stream. Searches prefixes w_V (length <= max_len) such that the streams w_V : V_solution
// satisfy every original equation on the first n positions and the original root is the solution root.
inline bool solution_satisfies(const zs::ZipSpec& original, const zs::ZipSpec& solution, std::size_t n,
                               std::size_t max_len = 2) {
  std::vector<std::vector<std::string>> words{{}};
  for (std::size_t len = 1; len <= max_len; ++len)
    for (const auto& w : std::vector<std::vector<std::string>>(words))
      if (w.size() == len - 1)
        for (const auto& a : original.alphabet) {
          auto x = w;
          x.push_back(a);
          words.push_back(x);
        }
  auto vars = original.vars();
  for (const auto& v : vars)
    if (!solution.has(v)) return false;
  std::vector<std::size_t> pick(vars.size(), 0);
  for (;;) {
    zs::ZipSpec s = solution;
    auto rename = [&](zs::Term t) {
      for (const auto& v : vars) t = zs::substitute(t, v, zs::mk_var("D_" + v));
      return t;
    };
    for (std::size_t i = 0; i < vars.size(); ++i) s.add("D_" + vars[i], zs::mk_cons(words[pick[i]], zs::mk_var(vars[i])));
    for (const auto& e : original.equations()) s.add("C_" + e.var, rename(e.rhs));
    s.refresh();
    NaiveStreams o(s, n);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      ok = o.var("D_" + original.root)[i] && o.var("D_" + original.root)[i] == o.var(solution.root)[i];
      for (const auto& v : vars) ok = ok && o.var("D_" + v)[i] && o.var("D_" + v)[i] == o.var("C_" + v)[i];
    }
    if (ok) return true;
    std::size_t j = 0;
    while (j < pick.size() && ++pick[j] == words.size()) pick[j++] = 0;
    if (j == pick.size()) return false;
  }
}

// ---- generators ----

using Rng = std::mt19937_64;

inline std::uint64_t uniform(Rng& r, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(r);
}

inline zs::Automaton random_dfao(Rng& r, std::size_t max_states, std::uint64_t max_k, std::size_t symbols = 2) {
  zs::Automaton a;
  a.mixed = false;
  a.k = uniform(r, 2, max_k);
  std::size_t n = uniform(r, 1, max_states);
  for (std::size_t q = 0; q < n; ++q) a.add_state(std::to_string(uniform(r, 0, symbols - 1)), "q" + std::to_string(q), a.k);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t d = 0; d < a.k; ++d) a.delta[q][d] = uniform(r, 0, n - 1);
  a.initial = 0;
  return a;
}

// Zero-invariant: each 0-edge goes to a state with the same output.
inline zs::Automaton random_zero_invariant_dfao(Rng& r, std::size_t max_states, std::uint64_t max_k, std::size_t symbols = 2) {
  zs::Automaton a = random_dfao(r, max_states, max_k, symbols);
  for (std::size_t q = 0; q < a.size(); ++q) {
    std::vector<std::size_t> same;
    for (std::size_t t = 0; t < a.size(); ++t)
      if (a.out[t] == a.out[q]) same.push_back(t);
    a.delta[q][0] = same[uniform(r, 0, same.size() - 1)];
  }
  return a;
}

// Not zero-invariant at the initial state.
inline zs::Automaton random_non_invariant_dfao(Rng& r, std::size_t max_states, std::uint64_t max_k) {
  for (;;) {
    zs::Automaton a = random_dfao(r, std::max<std::size_t>(2, max_states), max_k);
    if (a.size() < 2) continue;
    if (a.out[a.delta[a.initial][0]] != a.out[a.initial]) return a;
  }
}

// Flat zip-k specification X_i = a_i : zip(X_.., ..., X_..); always productive.
inline zs::ZipSpec random_flat_spec(Rng& r, std::size_t n, std::uint64_t k, std::size_t max_prefix = 1,
                                    const std::string& prefix = "X") {
  zs::ZipSpec s;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<zs::Term> args;
    for (std::uint64_t j = 0; j < k; ++j) args.push_back(zs::mk_var(prefix + std::to_string(uniform(r, 0, n - 1))));
    std::vector<zs::Symbol> pre;
    std::size_t m = uniform(r, 1, max_prefix);
    for (std::size_t j = 0; j < m; ++j) pre.push_back(std::to_string(uniform(r, 0, 1)));
    s.add(prefix + std::to_string(i), zs::mk_cons(pre, zs::mk_zip(std::move(args))));
  }
  s.root = prefix + "0";
  s.alphabet = {"0", "1"};
  s.alphabet_declared = true;
  s.refresh();
  return s;
}

// Random term over the given variables; guard probability keeps most specs productive.
inline zs::Term random_term(Rng& r, const std::vector<std::string>& vars, int depth, bool allow_proj) {
  int choice = static_cast<int>(uniform(r, 0, depth <= 0 ? 1 : (allow_proj ? 4 : 3)));
  switch (choice) {
    case 0:
      return zs::mk_var(vars[uniform(r, 0, vars.size() - 1)]);
    case 1:
      return zs::mk_cons(std::to_string(uniform(r, 0, 1)), random_term(r, vars, depth - 1, allow_proj));
    case 2:
    case 3: {
      std::vector<zs::Term> args;
      std::size_t k = uniform(r, 1, 3);
      for (std::size_t j = 0; j < k; ++j) args.push_back(random_term(r, vars, depth - 1, allow_proj));
      return zs::mk_zip(std::move(args));
    }
    default: {
      std::uint64_t k = uniform(r, 1, 3);
      return zs::mk_proj(uniform(r, 0, k - 1), k, random_term(r, vars, depth - 1, allow_proj));
    }
  }
}

inline zs::ZipSpec random_spec(Rng& r, std::size_t n, bool allow_proj) {
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < n; ++i) vars.push_back("V" + std::to_string(i));
  zs::ZipSpec s;
  for (const auto& v : vars) s.add(v, random_term(r, vars, 3, allow_proj));
  s.root = vars[0];
  s.refresh();
  return s;
}

// Decreasing program with outputs; small numbers so the 128-bit oracle applies.
inline zs::FractranProgram random_decreasing_fractran(Rng& r) {
  zs::FractranProgram f;
  std::size_t m = uniform(r, 1, 4);
  for (std::size_t j = 0; j < m; ++j) {
    std::uint64_t q = uniform(r, 2, 12);
    std::uint64_t p = uniform(r, 1, q - 1);
    f.fractions.push_back({p, q, std::nullopt});
  }
  std::size_t outs = uniform(r, 0, 2);
  for (std::size_t j = 0; j < outs; ++j)
    f.fractions.push_back({uniform(r, 1, 5), uniform(r, 1, 6), std::string(1, static_cast<char>('a' + j))});
  std::shuffle(f.fractions.begin(), f.fractions.end(), r);
  return f;
}

}  // namespace oracle
