#include "zipstream/automata.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace zs {

std::size_t Automaton::add_state(Symbol o, std::string name, std::size_t base) {
  out.push_back(std::move(o));
  names.push_back(std::move(name));
  delta.emplace_back(base, 0);
  return out.size() - 1;
}

void Automaton::check() const {
  if (out.empty()) throw FormatError("automaton has no states");
  if (delta.size() != out.size() || names.size() != out.size()) throw FormatError("automaton tables have different lengths");
  if (initial >= size()) throw FormatError("initial state out of range");
  if (!mixed && k < 2) throw FormatError("base below 2");
  for (std::size_t q = 0; q < size(); ++q) {
    if (!mixed && delta[q].size() != k)
      throw FormatError("state " + names[q] + " has " + std::to_string(delta[q].size()) + " edges, expected " + std::to_string(k));
    if (mixed && delta[q].size() < 2) throw FormatError("state " + names[q] + " has base below 2");
    for (auto t : delta[q])
      if (t >= size()) throw FormatError("edge target out of range at state " + names[q]);
  }
}

DigitWord digits_base_k(std::uint64_t n, std::uint64_t k) {
  if (k < 2) throw ArityZero("base must be at least 2");
  DigitWord w;
  for (; n > 0; n /= k) w.push_back(n % k);
  std::reverse(w.begin(), w.end());
  return w;
}

DigitWord repr_mix(std::uint64_t n, const Automaton& P, std::optional<std::size_t> q) {
  std::size_t s = q.value_or(P.initial);
  DigitWord w;
  while (n > 0) {
    std::uint64_t b = P.base(s);
    std::uint64_t d = n % b;
    w.push_back(d);
    n /= b;
    s = P.delta[s][d];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

std::uint64_t value_mix(const DigitWord& w, const Automaton& P, std::optional<std::size_t> q) {
  // Least significant digit first: value = d0 + b0 * (d1 + b1 * (...)).
  std::size_t s = q.value_or(P.initial);
  std::uint64_t value = 0, scale = 1;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    value += *it * scale;
    scale *= P.base(s);
    s = P.delta[s][*it];
  }
  return value;
}

std::string digits_to_string(const DigitWord& w) {
  bool wide = std::any_of(w.begin(), w.end(), [](std::uint64_t d) { return d > 9; });
  std::string s;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (wide && j) s += ' ';
    s += std::to_string(w[j]);
  }
  return s;
}

std::size_t run_word(const Automaton& A, std::size_t q, const DigitWord& w) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (*it >= A.base(q)) throw FormatError("digit " + std::to_string(*it) + " out of range at state " + A.names[q]);
    q = A.delta[q][*it];
  }
  return q;
}

Symbol generate(const Automaton& A, std::size_t q, std::uint64_t n) {
  if (A.mixed) return generate_mix(A, q, n);
  // Digits consumed as they are produced: least significant first.
  while (n > 0) {
    q = A.delta[q][n % A.k];
    n /= A.k;
  }
  return A.out[q];
}

Symbol generate(const Automaton& A, std::uint64_t n) { return generate(A, A.initial, n); }

Symbol generate_mix(const Automaton& A, std::size_t q, std::uint64_t n) {
  while (n > 0) {
    std::uint64_t b = A.base(q);
    q = A.delta[q][n % b];
    n /= b;
  }
  return A.out[q];
}

Automaton base_determiner(const Automaton& A) {
  Automaton P = A;
  for (std::size_t q = 0; q < P.size(); ++q) P.out[q] = std::to_string(P.base(q));
  return P;
}

bool compatible(const Automaton& A, const Automaton& P) {
  const std::size_t off = A.size();
  std::vector<std::size_t> parent(off + P.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::pair<std::size_t, std::size_t>> todo{{A.initial, P.initial}};
  parent[find(off + P.initial)] = find(A.initial);
  for (std::size_t j = 0; j < todo.size(); ++j) {
    auto [a, p] = todo[j];
    if (A.base(a) != P.base(p)) return false;
    for (std::size_t d = 0; d < A.base(a); ++d) {
      std::size_t x = find(A.delta[a][d]), y = find(off + P.delta[p][d]);
      if (x != y) {
        parent[y] = x;
        todo.emplace_back(A.delta[a][d], P.delta[p][d]);
      }
    }
  }
  return true;
}

namespace {
std::vector<std::size_t> reachable_states(const Automaton& A) {
  std::vector<std::size_t> order{A.initial};
  std::vector<bool> seen(A.size(), false);
  seen[A.initial] = true;
  for (std::size_t j = 0; j < order.size(); ++j)
    for (auto t : A.delta[order[j]])
      if (!seen[t]) {
        seen[t] = true;
        order.push_back(t);
      }
  return order;
}
}  // namespace

bool is_zero_invariant(const Automaton& A, std::size_t* offender) {
  for (auto q : reachable_states(A))
    if (A.out[A.delta[q][0]] != A.out[q]) {
      if (offender) *offender = q;
      return false;
    }
  return true;
}

Automaton make_zero_invariant(const Automaton& A) {
  A.check();
  // Override component: none (plain) or the symbol a 0-edge must keep showing.
  using Key = std::pair<std::size_t, std::optional<Symbol>>;
  Automaton R;
  R.mixed = A.mixed;
  R.k = A.k;
  std::map<Key, std::size_t> id;
  std::vector<Key> keys;
  auto state = [&](const Key& key) {
    auto [it, fresh] = id.emplace(key, keys.size());
    if (fresh) {
      keys.push_back(key);
      const auto& [q, over] = key;
      R.add_state(over ? *over : A.out[q], over ? A.names[q] + "/" + *over : A.names[q], A.base(q));
    }
    return it->second;
  };
  R.initial = state({A.initial, std::nullopt});
  for (std::size_t j = 0; j < keys.size(); ++j) {
    const auto [q, over] = keys[j];
    const Symbol shown = R.out[j];
    std::size_t zero = state({A.delta[q][0], shown});
    R.delta[j][0] = zero;
    for (std::size_t d = 1; d < A.base(q); ++d) {
      std::size_t t = state({A.delta[q][d], std::nullopt});
      R.delta[j][d] = t;
    }
  }
  return R;
}

ObsGraph dfao_to_graph(const Automaton& A) {
  A.check();
  std::size_t bad = 0;
  if (!is_zero_invariant(A, &bad))
    throw NotZeroInvariant("state " + A.names[bad] + " outputs " + A.out[bad] + " but its 0-successor outputs " +
                           A.out[A.delta[bad][0]]);
  ObsGraph g;
  g.cobasis = A.mixed ? Cobasis::Mix : Cobasis::N;
  g.k = A.mixed ? 0 : A.k;
  g.root = A.initial;
  g.out = A.out;
  g.succ = A.delta;
  g.names = A.names;
  return g;
}

Automaton graph_to_dfao(const ObsGraph& g) {
  if (g.cobasis == Cobasis::O) throw CobasisMismatch("an O_k graph does not read base-k digits");
  Automaton A;
  A.mixed = g.cobasis == Cobasis::Mix;
  A.k = A.mixed ? 0 : g.k;
  A.initial = g.root;
  A.out = g.out;
  A.delta = g.succ;
  A.names = g.names;
  return A;
}

Automaton zip_for_mix_demo(const Automaton& A, const Automaton& B) {
  Automaton C;
  C.mixed = true;
  C.k = 0;
  C.add_state(A.out[A.initial], "s0", 2);
  const std::size_t offA = 1, offB = 1 + A.size();
  for (std::size_t q = 0; q < A.size(); ++q) C.add_state(A.out[q], "A." + A.names[q], A.base(q));
  for (std::size_t q = 0; q < B.size(); ++q) C.add_state(B.out[q], "B." + B.names[q], B.base(q));
  C.delta[0][0] = offA + A.initial;
  C.delta[0][1] = offB + B.initial;
  for (std::size_t q = 0; q < A.size(); ++q)
    for (std::size_t d = 0; d < A.base(q); ++d) C.delta[offA + q][d] = offA + A.delta[q][d];
  for (std::size_t q = 0; q < B.size(); ++q)
    for (std::size_t d = 0; d < B.base(q); ++d) C.delta[offB + q][d] = offB + B.delta[q][d];
  C.initial = 0;
  return C;
}

}  // namespace zs
