#include "zipstream/analysis.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "zipstream/transform.hpp"

namespace zs {
namespace {

struct LeftSegment {
  std::vector<Term> terms;  // rhs and the terms below it on the leftmost path, excluding the final variable
  std::string target;
  bool guarded = false;
};

LeftSegment left_segment(const ZipSpec& s, const std::string& var) {
  LeftSegment seg;
  Term t = s.rhs(var);
  for (;;) {
    switch (t->kind) {
      case TermKind::Var:
        seg.target = t->name;
        return seg;
      case TermKind::Cons:
        seg.terms.push_back(t);
        seg.guarded = true;
        t = t->tail();
        break;
      case TermKind::Zip:
        seg.terms.push_back(t);
        t = t->args[0];
        break;
      case TermKind::Proj:
        throw PiDialectUnsupported("leftmost cycles are not defined for specifications with projections");
      case TermKind::Tl:
        throw PiDialectUnsupported("tl may not appear in a specification");
    }
  }
}

}  // namespace

CycleReport leftmost_cycles(const ZipSpec& s) {
  const auto vars = s.vars();
  std::unordered_map<std::string, LeftSegment> seg;
  for (const auto& v : vars) seg[v] = left_segment(s, v);

  // Functional graph: walk from each variable, a revisit within the current walk closes a cycle.
  enum class Mark { None, Active, Done };
  std::unordered_map<std::string, Mark> mark;
  CycleReport rep;
  for (const auto& start : vars) {
    if (mark[start] != Mark::None) continue;
    std::vector<std::string> walk;
    std::string v = start;
    while (mark[v] == Mark::None) {
      mark[v] = Mark::Active;
      walk.push_back(v);
      v = seg[v].target;
    }
    if (mark[v] == Mark::Active) {
      auto from = std::find(walk.begin(), walk.end(), v);
      std::vector<std::string> cyc(from, walk.end());
      auto first = std::min_element(cyc.begin(), cyc.end(),
                                     [&](const std::string& a, const std::string& b) { return s.index_of(a) < s.index_of(b); });
      std::rotate(cyc.begin(), first, cyc.end());
      LeftmostCycle c;
      c.vars = cyc;
      for (const auto& u : cyc) {
        c.path.push_back(mk_var(u));
        for (Term t : seg[u].terms) c.path.push_back(t);
        c.guarded |= seg[u].guarded;
      }
      c.path.push_back(mk_var(cyc.front()));
      rep.cycles.push_back(std::move(c));
    }
    for (const auto& w : walk) mark[w] = Mark::Done;
  }
  std::sort(rep.cycles.begin(), rep.cycles.end(), [&](const LeftmostCycle& a, const LeftmostCycle& b) {
    return s.index_of(a.vars.front()) < s.index_of(b.vars.front());
  });
  for (const auto& c : rep.cycles)
    if (!c.guarded) rep.representatives.push_back(c.vars.front());
  return rep;
}

ProductivityReport check_productivity(const ZipSpec& s, RewriteBudget b, std::size_t probe) {
  ProductivityReport r;
  bool has_proj = std::any_of(s.equations().begin(), s.equations().end(),
                              [](const Equation& e) { return contains_kind(e.rhs, TermKind::Proj); });
  if (!has_proj) {
    auto rep = leftmost_cycles(s);
    r.productive = rep.representatives.empty();
    if (!r.productive) r.note = "unguarded leftmost cycle through " + rep.representatives.front();
    return r;
  }
  r.decided = false;
  StreamIndexer ix(s, b);
  try {
    for (; r.probed < probe; ++r.probed) ix.at(r.probed);
    r.productive = true;
    r.note = "first " + std::to_string(probe) + " elements evaluated; productivity with projections is only semi-decided";
  } catch (const BudgetExhausted& e) {
    r.productive = false;
    r.note = std::string("element ") + std::to_string(r.probed) + " not produced: " + e.what();
  }
  return r;
}

bool is_productive(const ZipSpec& s, RewriteBudget b) { return check_productivity(s, b).productive; }

namespace {

struct NeedsFreeRoot {};

void hoist(ZipSpec& s, const std::string& x, bool signal_root = false) {
  if (x == s.root) {
    if (signal_root) throw NeedsFreeRoot{};
    throw RootHoistForbidden("cannot hoist the root " + x);
  }
  Term r = s.rhs(x);
  if (!r->is_cons()) throw NoRedex("equation for " + x + " does not start with a symbol");
  Term ax = mk_cons(r->name, mk_var(x));
  for (const auto& v : s.vars()) {
    Term body = v == x ? r->tail() : s.rhs(v);
    s.set(v, substitute(body, x, ax));
  }
}

Term zip_contract(Term z) {
  Term first = z->args[0];
  std::vector<Term> args(z->args.begin() + 1, z->args.end());
  args.push_back(first->tail());
  return mk_cons(first->name, mk_zip(std::move(args)));
}

Term rewrite_first_zip_redex(Term t, bool& done) {
  if (done) return t;
  if (t->is_zip() && t->args[0]->is_cons()) {
    done = true;
    return zip_contract(t);
  }
  switch (t->kind) {
    case TermKind::Cons: {
      Term tail = rewrite_first_zip_redex(t->tail(), done);
      return tail == t->tail() ? t : mk_cons(t->name, tail);
    }
    case TermKind::Zip: {
      std::vector<Term> args;
      for (Term a : t->args) args.push_back(rewrite_first_zip_redex(a, done));
      return done ? mk_zip(std::move(args)) : t;
    }
    case TermKind::Proj: {
      Term inner = rewrite_first_zip_redex(t->tail(), done);
      return inner == t->tail() ? t : mk_proj(t->i, t->k, inner);
    }
    case TermKind::Tl: {
      Term inner = rewrite_first_zip_redex(t->tail(), done);
      return inner == t->tail() ? t : mk_tl(inner);
    }
    default:
      return t;
  }
}

Term replace_all(Term t, Term from, Term to) {
  if (t == from) return to;
  if (t->args.empty()) return t;
  std::vector<Term> args;
  bool changed = false;
  for (Term a : t->args) {
    args.push_back(replace_all(a, from, to));
    changed |= args.back() != a;
  }
  if (!changed) return t;
  switch (t->kind) {
    case TermKind::Cons: return mk_cons(t->name, args[0]);
    case TermKind::Zip: return mk_zip(std::move(args));
    case TermKind::Proj: return mk_proj(t->i, t->k, args[0]);
    case TermKind::Tl: return mk_tl(args[0]);
    default: return t;
  }
}

Term find_first_tl_preorder(Term t) {
  if (t->is_tl()) {
    if (Term inner = find_first_tl_preorder(t->tail())) return inner;
    return t;
  }
  for (Term a : t->args)
    if (Term f = find_first_tl_preorder(a)) return f;
  return nullptr;
}

// Tl elimination engine: hoisting makes a variable's head visible wherever tl demands it.
class TlEliminator {
 public:
  explicit TlEliminator(ZipSpec& s) : s_(s) {}

  void run() {
    for (;;) {
      const Equation* eq = nullptr;
      for (const auto& e : s_.equations())
        if (contains_kind(e.rhs, TermKind::Tl)) {
          eq = &e;
          break;
        }
      if (!eq) return;
      std::string v = eq->var;
      Term target = find_first_tl_preorder(eq->rhs);
      reduce_tl(v, target);
    }
  }

  void ensure_cons_headed(const std::string& v) {
    if (!in_progress_.insert(v).second)
      throw InternalNonTermination("tl elimination revisited " + v + " before producing its head");
    for (;;) {
      tick();
      Term r = s_.rhs(v);
      if (r->is_cons()) break;
      Term t = r;
      for (;;) {
        if (t->is_var()) {
          ensure_cons_headed(t->name);
          hoist(s_, t->name, true);
          break;
        }
        if (t->is_zip()) {
          if (t->args[0]->is_cons()) {
            s_.set(v, replace_all(r, t, zip_contract(t)));
            break;
          }
          t = t->args[0];
          continue;
        }
        if (t->is_tl()) {
          Term x = t->tail();
          if (x->is_tl()) {
            t = x;
            continue;
          }
          reduce_tl(v, t);
          break;
        }
        throw PiDialectUnsupported("projection on a leftmost path during tl elimination");
      }
    }
    in_progress_.erase(v);
  }

 private:
  void reduce_tl(const std::string& v, Term target) {
    tick();
    Term x = target->tail();
    switch (x->kind) {
      case TermKind::Cons:
        s_.set(v, replace_all(s_.rhs(v), target, x->tail()));
        return;
      case TermKind::Zip: {
        std::vector<Term> args(x->args.begin() + 1, x->args.end());
        args.push_back(mk_tl(x->args[0]));
        s_.set(v, replace_all(s_.rhs(v), target, mk_zip(std::move(args))));
        return;
      }
      case TermKind::Var:
        ensure_cons_headed(x->name);
        hoist(s_, x->name, true);
        return;
      case TermKind::Tl:
        reduce_tl(v, x);
        return;
      case TermKind::Proj:
        throw PiDialectUnsupported("tl applied to a projection");
    }
  }

  void tick() {
    if (++steps_ > 1'000'000) throw InternalNonTermination("tl elimination did not terminate");
  }

  ZipSpec& s_;
  std::unordered_set<std::string> in_progress_;
  std::size_t steps_ = 0;
};

ZipSpec solve_attempt(ZipSpec s, const std::vector<std::string>& reps, const std::vector<Symbol>& choice) {
  for (std::size_t j = 0; j < reps.size(); ++j) s.set(reps[j], mk_cons(choice[j], mk_tl(s.rhs(reps[j]))));
  for (const auto& y : reps) hoist(s, y, true);
  TlEliminator(s).run();
  return s;
}

}  // namespace

ZipSpec evolve_step(const ZipSpec& s, const EvolveChoice& c) {
  ZipSpec out = s;
  if (c.kind == EvolveChoice::Kind::Hoist) {
    hoist(out, c.var);
    return out;
  }
  bool done = false;
  Term r = rewrite_first_zip_redex(out.rhs(c.var), done);
  if (!done) throw NoRedex("no zip redex in the equation for " + c.var);
  out.set(c.var, r);
  return out;
}

ZipSpec solve_with(const ZipSpec& s, const std::vector<Symbol>& choice) {
  auto reps = leftmost_cycles(s).representatives;
  if (choice.size() != reps.size())
    throw Error("expected " + std::to_string(reps.size()) + " symbols, got " + std::to_string(choice.size()));
  if (reps.empty()) return s;
  // Without a zip on the cycle nothing consumes the pending tl: every stream is a solution there.
  for (const auto& c : leftmost_cycles(s).cycles)
    if (!c.guarded && std::none_of(c.path.begin(), c.path.end(), [](Term t) { return t->is_zip() && t->k >= 2; }))
      throw InternalNonTermination("unguarded cycle through " + c.vars.front() +
                                   " has no zip of arity 2 or more, so fixing its first symbol does not determine a solution");
  ZipSpec base = s;
  if (std::find(reps.begin(), reps.end(), s.root) != reps.end()) base = ensure_free_root(s);
  ZipSpec out;
  try {
    out = solve_attempt(base, reps, choice);
  } catch (const NeedsFreeRoot&) {
    out = solve_attempt(ensure_free_root(s), reps, choice);
  }
  auto alphabet = s.alphabet;
  bool declared = s.alphabet_declared;
  out.refresh();
  out.alphabet = alphabet;
  out.alphabet_declared = declared;
  if (!leftmost_cycles(out).representatives.empty())
    throw InternalNonTermination("solution for " + s.root + " still has an unguarded leftmost cycle");
  return out;
}

std::vector<ZipSpec> solve_all(const ZipSpec& s) {
  auto reps = leftmost_cycles(s).representatives;
  if (reps.empty()) return {s};
  const auto& sigma = s.alphabet;
  std::vector<ZipSpec> out;
  if (sigma.empty()) return out;
  std::vector<std::size_t> digit(reps.size(), 0);
  for (;;) {
    std::vector<Symbol> choice;
    for (auto d : digit) choice.push_back(sigma[d]);
    out.push_back(solve_with(s, choice));
    std::size_t j = digit.size();
    while (j > 0) {
      --j;
      if (++digit[j] < sigma.size()) break;
      digit[j] = 0;
      if (j == 0) return out;
    }
  }
}

}  // namespace zs
