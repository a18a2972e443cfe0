#include "zipstream/semantics.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

namespace zs {

Evaluator::Evaluator(ZipSpec s, RewriteBudget b) : spec_(std::move(s)), budget_(b) {}

void Evaluator::tick() {
  if (++steps_ > budget_.max_steps)
    throw BudgetExhausted("rewrite budget of " + std::to_string(budget_.max_steps) + " steps exhausted");
}

std::pair<Symbol, Term> Evaluator::expand_head(Term t) {
  if (auto it = memo_.find(t); it != memo_.end()) return it->second;
  if (t->is_cons()) return {t->name, t->tail()};

  // Explicit stack instead of recursion: nested zips and projection chains can be deep.
  // An alias frame takes the result of the term it reduced to.
  struct Frame {
    Term t;
    bool alias;
  };
  std::vector<Frame> stack;
  std::unordered_set<Term> active;
  Term cur = t;
  std::pair<Symbol, Term> res;

  for (;;) {
    for (;;) {
      if (auto it = memo_.find(cur); it != memo_.end()) {
        res = it->second;
        break;
      }
      if (cur->is_cons()) {
        res = {cur->name, cur->tail()};
        break;
      }
      if (!active.insert(cur).second)
        throw BudgetExhausted("non-productive demand: the head of " + print_term(cur) + " depends on itself");
      tick();
      switch (cur->kind) {
        case TermKind::Var:
          stack.push_back({cur, true});
          cur = spec_.rhs(cur->name);
          break;
        default:
          stack.push_back({cur, false});
          cur = cur->args[0];
          break;
      }
    }

    bool descend = false;
    while (!stack.empty() && !descend) {
      Frame f = stack.back();
      stack.pop_back();
      if (!f.alias) {
        Term ft = f.t;
        switch (ft->kind) {
          case TermKind::Zip: {
            std::vector<Term> args(ft->args.begin() + 1, ft->args.end());
            args.push_back(res.second);
            res = {res.first, mk_zip(std::move(args))};
            break;
          }
          case TermKind::Proj:
            if (ft->i == 0) {
              res = {res.first, mk_proj(ft->k - 1, ft->k, res.second)};
            } else {
              stack.push_back({ft, true});
              cur = mk_proj(ft->i - 1, ft->k, res.second);
              descend = true;
              continue;
            }
            break;
          case TermKind::Tl:
            stack.push_back({ft, true});
            cur = res.second;
            descend = true;
            continue;
          default:
            break;
        }
      }
      memo_[f.t] = res;
      active.erase(f.t);
    }
    if (!descend) return res;
  }
}

Prefix Evaluator::prefix(Term t, std::size_t n) {
  Prefix out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto [a, rest] = expand_head(t);
    out.push_back(a);
    t = rest;
  }
  return out;
}

std::pair<Symbol, Term> expand_head(Term t, const ZipSpec& s, RewriteBudget b) { return Evaluator(s, b).expand_head(t); }

Prefix eval_prefix(const ZipSpec& s, std::size_t n, RewriteBudget b) {
  Evaluator ev(s, b);
  return ev.prefix(mk_var(s.root), n);
}

Prefix project_prefix(const ZipSpec& s, std::uint64_t i, std::uint64_t k, std::size_t n, RewriteBudget b) {
  if (k == 0) throw ArityZero("proj modulus 0");
  Evaluator ev(s, b);
  return ev.prefix(mk_proj(i, k, mk_var(s.root)), n);
}

Term project_through_zip(std::uint64_t i, std::uint64_t n, std::uint64_t k, const std::vector<Term>& args) {
  if (n == 0 || k == 0) throw ArityZero("projection through zip needs positive n and k");
  if (args.size() != k) throw ArityZero("argument count differs from zip arity");
  std::vector<Term> out;
  out.reserve(k);
  for (std::uint64_t z = 0; z < k; ++z) {
    std::uint64_t f = i + z * n;
    out.push_back(mk_proj(f / k, n, args[f % k]));
  }
  return mk_zip(std::move(out));
}

StreamIndexer::StreamIndexer(ZipSpec s, RewriteBudget b) : spec_(std::move(s)), budget_(b) {
  for (const auto& e : spec_.equations()) {
    rhs_[e.var] = e.rhs;
    auto [pre, rest] = split_prefix(e.rhs);
    if (!pre.empty() && rest->is_var() && rest->name == e.var) period_[e.var] = pre.size();
  }
}

Symbol StreamIndexer::at(Term t, std::uint64_t n) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (;;) {
    if (++steps_ > budget_.max_steps)
      throw BudgetExhausted("rewrite budget of " + std::to_string(budget_.max_steps) + " steps exhausted");
    switch (t->kind) {
      case TermKind::Var: {
        auto it = rhs_.find(t->name);
        if (it == rhs_.end()) throw UndefinedVariable("undefined variable " + t->name);
        if (auto p = period_.find(t->name); p != period_.end()) n %= p->second;
        t = it->second;
        break;
      }
      case TermKind::Cons:
        if (n == 0) return t->name;
        --n;
        t = t->tail();
        break;
      case TermKind::Zip: {
        std::uint64_t k = t->k;
        t = t->args[n % k];
        n /= k;
        break;
      }
      case TermKind::Proj:
        if (n > (kMax - t->i) / t->k) throw BudgetExhausted("stream index overflow");
        n = n * t->k + t->i;
        t = t->tail();
        break;
      case TermKind::Tl:
        ++n;
        t = t->tail();
        break;
    }
  }
}

Symbol StreamIndexer::at(std::uint64_t n) { return at(mk_var(spec_.root), n); }

Prefix StreamIndexer::prefix(std::size_t n) {
  Prefix out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) out.push_back(at(j));
  return out;
}

bool is_graph_ready(const ZipSpec& s, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  for (const auto& e : s.equations()) {
    if (contains_kind(e.rhs, TermKind::Proj)) return fail("equation for " + e.var + " contains a projection");
    if (contains_kind(e.rhs, TermKind::Tl)) return fail("equation for " + e.var + " contains tl");
  }
  for (auto k : zip_arities(s))
    if (k < 2) return fail("zip of arity " + std::to_string(k) + " present");
  // A zip-free cycle runs through equations of the form X = c1:...:cm:Y.
  std::unordered_map<std::string, std::string> tail_var;
  for (const auto& e : s.equations()) {
    auto [pre, rest] = split_prefix(e.rhs);
    if (rest->is_var()) tail_var[e.var] = rest->name;
  }
  for (const auto& e : s.equations()) {
    std::string v = e.var;
    std::size_t hops = 0;
    while (tail_var.count(v)) {
      v = tail_var[v];
      if (++hops > s.size()) return fail("zip-free cycle through " + e.var);
    }
  }
  return true;
}

Normalizer::Normalizer(ZipSpec s, RewriteBudget b) : spec_(std::move(s)), budget_(b) {
  std::string why;
  if (!is_graph_ready(spec_, &why)) throw NotFlat("specification is not ready for normalization: " + why);
}

void Normalizer::tick() {
  if (++steps_ > budget_.max_steps)
    throw BudgetExhausted("rewrite budget of " + std::to_string(budget_.max_steps) + " steps exhausted");
}

Term Normalizer::proj(std::uint64_t i, std::uint64_t k, Term t) {
  std::vector<Symbol> produced;
  for (;;) {
    tick();
    switch (t->kind) {
      case TermKind::Var:
        t = spec_.rhs(t->name);
        break;
      case TermKind::Cons:
        if (i == 0) {
          produced.push_back(t->name);
          i = k - 1;
        } else {
          --i;
        }
        t = t->tail();
        break;
      case TermKind::Zip:
        if (t->k == k && i < k) return mk_cons(produced, t->args[i]);
        return mk_cons(produced, mk_proj(i, k, t));
      default:
        return mk_cons(produced, mk_proj(i, k, t));
    }
  }
}

Symbol Normalizer::head(Term t) {
  std::unordered_set<std::string> seen;
  for (;;) {
    tick();
    switch (t->kind) {
      case TermKind::Cons:
        return t->name;
      case TermKind::Var:
        if (!seen.insert(t->name).second)
          throw BudgetExhausted("non-productive demand: the head of " + t->name + " depends on itself");
        t = spec_.rhs(t->name);
        break;
      case TermKind::Zip:
        t = t->args[0];
        break;
      case TermKind::Proj: {
        Term r = proj(t->i, t->k, normalize(t->tail()));
        if (r == t || (r->is_proj())) throw NotFlat("head of a stuck projection " + print_term(r));
        t = r;
        break;
      }
      case TermKind::Tl:
        throw NotFlat("tl has no observation rule");
    }
  }
}

Term Normalizer::normalize(Term t) {
  switch (t->kind) {
    case TermKind::Var:
      return t;
    case TermKind::Cons:
      return mk_cons(t->name, normalize(t->tail()));
    case TermKind::Zip: {
      std::vector<Term> args;
      for (Term a : t->args) args.push_back(normalize(a));
      return mk_zip(std::move(args));
    }
    case TermKind::Proj:
      return proj(t->i, t->k, normalize(t->tail()));
    case TermKind::Tl:
      throw NotFlat("tl has no observation rule");
  }
  return t;
}

std::uint64_t Normalizer::arity(Term t) {
  for (;;) {
    tick();
    switch (t->kind) {
      case TermKind::Cons:
        t = t->tail();
        break;
      case TermKind::Var:
        t = spec_.rhs(t->name);
        break;
      case TermKind::Zip:
        return t->k;
      default:
        throw NotFlat("no zip in the unfolding of " + print_term(t));
    }
  }
}

Term normalize(Term t, const ZipSpec& s, RewriteBudget b) { return Normalizer(s, b).normalize(t); }
Symbol normalize_head(Term t, const ZipSpec& s, RewriteBudget b) { return Normalizer(s, b).head(t); }

}  // namespace zs
