#include <algorithm>
#include <deque>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_set>

#include "zipstream/core.hpp"

namespace zs {
namespace {

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t node_hash(const TermNode& n) {
  std::size_t h = std::hash<int>{}(static_cast<int>(n.kind));
  h = combine(h, std::hash<std::string>{}(n.name));
  h = combine(h, std::hash<std::uint64_t>{}(n.i));
  h = combine(h, std::hash<std::uint64_t>{}(n.k));
  for (Term a : n.args) h = combine(h, std::hash<const void*>{}(a));
  return h;
}

struct NodeHash {
  std::size_t operator()(const TermNode* n) const { return n->hash; }
};
struct NodeEq {
  bool operator()(const TermNode* a, const TermNode* b) const {
    return a->kind == b->kind && a->i == b->i && a->k == b->k && a->name == b->name && a->args == b->args;
  }
};

class InternTable {
 public:
  Term intern(TermNode&& probe) {
    probe.hash = node_hash(probe);
    {
      std::shared_lock lock(mu_);
      auto it = set_.find(&probe);
      if (it != set_.end()) return *it;
    }
    std::unique_lock lock(mu_);
    auto it = set_.find(&probe);
    if (it != set_.end()) return *it;
    auto node = std::make_unique<TermNode>(std::move(probe));
    node->id = nodes_.size();
    const TermNode* p = node.get();
    nodes_.push_back(std::move(node));
    set_.insert(p);
    return p;
  }
  std::size_t size() {
    std::shared_lock lock(mu_);
    return nodes_.size();
  }

 private:
  std::shared_mutex mu_;
  std::unordered_set<const TermNode*, NodeHash, NodeEq> set_;
  std::deque<std::unique_ptr<TermNode>> nodes_;
};

InternTable& table() {
  static InternTable t;
  return t;
}

}  // namespace

Term mk_var(std::string_view name) {
  TermNode n{TermKind::Var, std::string(name), {}};
  return table().intern(std::move(n));
}

Term mk_cons(std::string_view sym, Term tail) {
  TermNode n{TermKind::Cons, std::string(sym), {tail}};
  return table().intern(std::move(n));
}

Term mk_cons(const std::vector<Symbol>& prefix, Term tail) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) tail = mk_cons(*it, tail);
  return tail;
}

Term mk_zip(std::vector<Term> args) {
  if (args.empty()) throw ArityZero("zip with no arguments");
  TermNode n{TermKind::Zip, {}, std::move(args)};
  n.k = n.args.size();
  return table().intern(std::move(n));
}

Term mk_proj(std::uint64_t i, std::uint64_t k, Term t) {
  if (k == 0) throw ArityZero("proj with modulus 0");
  TermNode n{TermKind::Proj, {}, {t}};
  n.i = i;
  n.k = k;
  return table().intern(std::move(n));
}

Term mk_tl(Term t) {
  TermNode n{TermKind::Tl, {}, {t}};
  return table().intern(std::move(n));
}

std::size_t interned_term_count() { return table().size(); }

std::pair<std::vector<Symbol>, Term> split_prefix(Term t) {
  std::vector<Symbol> pre;
  while (t->is_cons()) {
    pre.push_back(t->name);
    t = t->tail();
  }
  return {pre, t};
}

Term substitute(Term t, std::string_view from, Term to) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == from ? to : t;
    case TermKind::Cons: {
      Term tail = substitute(t->tail(), from, to);
      return tail == t->tail() ? t : mk_cons(t->name, tail);
    }
    case TermKind::Zip: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (Term a : t->args) {
        args.push_back(substitute(a, from, to));
        changed |= args.back() != a;
      }
      return changed ? mk_zip(std::move(args)) : t;
    }
    case TermKind::Proj: {
      Term inner = substitute(t->tail(), from, to);
      return inner == t->tail() ? t : mk_proj(t->i, t->k, inner);
    }
    case TermKind::Tl: {
      Term inner = substitute(t->tail(), from, to);
      return inner == t->tail() ? t : mk_tl(inner);
    }
  }
  return t;
}

bool occurs(Term t, std::string_view var) {
  if (t->is_var()) return t->name == var;
  return std::any_of(t->args.begin(), t->args.end(), [&](Term a) { return occurs(a, var); });
}

void collect_vars(Term t, std::vector<std::string>& out) {
  if (t->is_var()) {
    if (std::find(out.begin(), out.end(), t->name) == out.end()) out.push_back(t->name);
    return;
  }
  for (Term a : t->args) collect_vars(a, out);
}

bool contains_kind(Term t, TermKind kind) {
  if (t->kind == kind) return true;
  return std::any_of(t->args.begin(), t->args.end(), [&](Term a) { return contains_kind(a, kind); });
}

namespace {
void print_into(Term t, std::string& out) {
  switch (t->kind) {
    case TermKind::Var:
      out += t->name;
      return;
    case TermKind::Cons:
      out += t->name;
      out += ':';
      print_into(t->tail(), out);
      return;
    case TermKind::Zip:
      out += "zip(";
      for (std::size_t j = 0; j < t->args.size(); ++j) {
        if (j) out += ", ";
        print_into(t->args[j], out);
      }
      out += ')';
      return;
    case TermKind::Proj:
      out += "proj(" + std::to_string(t->i) + ", " + std::to_string(t->k) + ", ";
      print_into(t->tail(), out);
      out += ')';
      return;
    case TermKind::Tl:
      out += "tl(";
      print_into(t->tail(), out);
      out += ')';
      return;
  }
}
}  // namespace

std::string print_term(Term t) {
  std::string out;
  print_into(t, out);
  return out;
}

std::string dialect_name(const Dialect& d) {
  switch (d.kind) {
    case DialectKind::ZipK:
      return "zip-k(" + std::to_string(d.k) + ")";
    case DialectKind::ZipMix:
      return "zip-mix";
    case DialectKind::ZipPi:
      return "zip-pi";
  }
  return "?";
}

bool ZipSpec::has(std::string_view var) const { return index_.count(std::string(var)) > 0; }

Term ZipSpec::rhs(std::string_view var) const {
  auto it = index_.find(std::string(var));
  if (it == index_.end()) throw UndefinedVariable("undefined variable " + std::string(var));
  return eqs_[it->second].rhs;
}

std::size_t ZipSpec::index_of(std::string_view var) const {
  auto it = index_.find(std::string(var));
  if (it == index_.end()) throw UndefinedVariable("undefined variable " + std::string(var));
  return it->second;
}

void ZipSpec::add(std::string var, Term rhs) {
  if (has(var)) throw DuplicateEquation("duplicate equation for " + var);
  index_[var] = eqs_.size();
  eqs_.push_back({std::move(var), rhs});
}

void ZipSpec::set(std::string_view var, Term rhs) { eqs_[index_of(var)].rhs = rhs; }

void ZipSpec::remove(std::string_view var) {
  std::size_t at = index_of(var);
  eqs_.erase(eqs_.begin() + static_cast<std::ptrdiff_t>(at));
  index_.clear();
  for (std::size_t j = 0; j < eqs_.size(); ++j) index_[eqs_[j].var] = j;
}

std::vector<std::string> ZipSpec::vars() const {
  std::vector<std::string> out;
  out.reserve(eqs_.size());
  for (const auto& e : eqs_) out.push_back(e.var);
  return out;
}

namespace {
void scan_term(Term t, bool& proj, std::vector<std::uint64_t>& arities, std::vector<Symbol>& syms) {
  switch (t->kind) {
    case TermKind::Proj:
      proj = true;
      break;
    case TermKind::Zip:
      if (std::find(arities.begin(), arities.end(), t->k) == arities.end()) arities.push_back(t->k);
      break;
    case TermKind::Cons:
      if (std::find(syms.begin(), syms.end(), t->name) == syms.end()) syms.push_back(t->name);
      break;
    default:
      break;
  }
  for (Term a : t->args) scan_term(a, proj, arities, syms);
}
}  // namespace

std::vector<std::uint64_t> zip_arities(const ZipSpec& s) {
  bool proj = false;
  std::vector<std::uint64_t> ar;
  std::vector<Symbol> syms;
  for (const auto& e : s.equations()) scan_term(e.rhs, proj, ar, syms);
  std::sort(ar.begin(), ar.end());
  return ar;
}

Dialect ZipSpec::inferred_dialect() const {
  bool proj = false;
  std::vector<std::uint64_t> ar;
  std::vector<Symbol> syms;
  for (const auto& e : eqs_) scan_term(e.rhs, proj, ar, syms);
  if (proj) return {DialectKind::ZipPi, 0};
  if (ar.empty()) return {DialectKind::ZipK, 2};
  if (ar.size() == 1) return {DialectKind::ZipK, ar[0]};
  return {DialectKind::ZipMix, 0};
}

void ZipSpec::refresh() {
  dialect = inferred_dialect();
  if (!alphabet_declared) {
    bool proj = false;
    std::vector<std::uint64_t> ar;
    std::vector<Symbol> syms;
    for (const auto& e : eqs_) scan_term(e.rhs, proj, ar, syms);
    alphabet = syms;
  }
}

std::string ZipSpec::fresh_name(const std::string& base) const {
  if (!has(base)) return base;
  for (std::size_t n = 1;; ++n) {
    std::string cand = base + std::to_string(n);
    if (!has(cand)) return cand;
  }
}

}  // namespace zs
