#include "zipstream/pdl.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace zs {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

// Interning tables. Nodes live for the whole process; the key encodes kind, name and child ids.
struct Tables {
  std::mutex mu;
  std::deque<PdlProgNode> progs;
  std::unordered_map<std::string, PdlProgram> prog_index;
  std::deque<PdlFormNode> forms;
  std::unordered_map<std::string, PdlFormula> form_index;
  // History-independent structural hash, used to order And/Or operands deterministically.
  std::unordered_map<const void*, std::size_t> shash;
};

Tables& tables() {
  static Tables t;
  return t;
}

std::string key_of(int kind, const std::string& name, const void* extra, const std::vector<std::uint64_t>& ids) {
  std::string k = std::to_string(kind) + "|" + std::to_string(name.size()) + ":" + name + "|" +
                  std::to_string(reinterpret_cast<std::uintptr_t>(extra));
  for (auto id : ids) k += "," + std::to_string(id);
  return k;
}

PdlProgram intern_prog(ProgKind kind, std::string label, std::vector<PdlProgram> args) {
  auto& T = tables();
  std::vector<std::uint64_t> ids;
  for (auto a : args) ids.push_back(a->id);
  std::string key = key_of(static_cast<int>(kind), label, nullptr, ids);
  std::lock_guard<std::mutex> lock(T.mu);
  auto it = T.prog_index.find(key);
  if (it != T.prog_index.end()) return it->second;
  std::size_t h = mix(std::hash<std::string>{}(label), static_cast<std::size_t>(kind) + 1);
  for (auto a : args) h = mix(h, T.shash.at(a));
  T.progs.push_back(PdlProgNode{kind, std::move(label), std::move(args), T.progs.size()});
  PdlProgram p = &T.progs.back();
  T.prog_index.emplace(std::move(key), p);
  T.shash.emplace(p, h);
  return p;
}

PdlFormula intern_form(FormKind kind, std::string atom, PdlProgram prog, std::vector<PdlFormula> args) {
  auto& T = tables();
  std::vector<std::uint64_t> ids;
  for (auto a : args) ids.push_back(a->id);
  std::string key = key_of(static_cast<int>(kind), atom, prog, ids);
  std::lock_guard<std::mutex> lock(T.mu);
  auto it = T.form_index.find(key);
  if (it != T.form_index.end()) return it->second;
  std::size_t h = mix(std::hash<std::string>{}(atom), static_cast<std::size_t>(kind) + 101);
  if (prog) h = mix(h, T.shash.at(prog));
  for (auto a : args) h = mix(h, T.shash.at(a));
  T.forms.push_back(PdlFormNode{kind, std::move(atom), prog, std::move(args), T.forms.size()});
  PdlFormula f = &T.forms.back();
  T.form_index.emplace(std::move(key), f);
  T.shash.emplace(f, h);
  return f;
}

std::size_t structural_hash(const void* p) {
  auto& T = tables();
  std::lock_guard<std::mutex> lock(T.mu);
  return T.shash.at(p);
}

PdlFormula nary(FormKind kind, std::vector<PdlFormula> fs) {
  std::vector<PdlFormula> flat;
  for (auto f : fs) {
    if (f->kind == kind)
      flat.insert(flat.end(), f->args.begin(), f->args.end());
    else
      flat.push_back(f);
  }
  const FormKind unit = kind == FormKind::And ? FormKind::True : FormKind::False;
  const FormKind zero = kind == FormKind::And ? FormKind::False : FormKind::True;
  flat.erase(std::remove_if(flat.begin(), flat.end(), [&](PdlFormula f) { return f->kind == unit; }), flat.end());
  for (auto f : flat)
    if (f->kind == zero) return f;
  std::vector<std::pair<std::size_t, PdlFormula>> keyed;
  for (auto f : flat) keyed.emplace_back(structural_hash(f), f);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second->id < b.second->id;
  });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.second == b.second; }),
              keyed.end());
  if (keyed.empty()) return intern_form(unit, "", nullptr, {});
  if (keyed.size() == 1) return keyed[0].second;
  std::vector<PdlFormula> args;
  for (auto& [h, f] : keyed) args.push_back(f);
  return intern_form(kind, "", nullptr, std::move(args));
}

}  // namespace

PdlProgram prog_atom(std::string_view label) { return intern_prog(ProgKind::Atom, std::string(label), {}); }
PdlProgram prog_seq(PdlProgram a, PdlProgram b) { return intern_prog(ProgKind::Seq, "", {a, b}); }
PdlProgram prog_union(PdlProgram a, PdlProgram b) { return intern_prog(ProgKind::Union, "", {a, b}); }
PdlProgram prog_star(PdlProgram a) { return intern_prog(ProgKind::Star, "", {a}); }

PdlFormula pdl_true() { return intern_form(FormKind::True, "", nullptr, {}); }
PdlFormula pdl_false() { return intern_form(FormKind::False, "", nullptr, {}); }
PdlFormula pdl_atom(std::string_view a) { return intern_form(FormKind::Atom, std::string(a), nullptr, {}); }
PdlFormula pdl_not(PdlFormula f) { return intern_form(FormKind::Not, "", nullptr, {f}); }
PdlFormula pdl_and(std::vector<PdlFormula> fs) { return nary(FormKind::And, std::move(fs)); }
PdlFormula pdl_or(std::vector<PdlFormula> fs) { return nary(FormKind::Or, std::move(fs)); }
PdlFormula pdl_implies(PdlFormula a, PdlFormula b) { return intern_form(FormKind::Implies, "", nullptr, {a, b}); }
PdlFormula pdl_iff(PdlFormula a, PdlFormula b) { return intern_form(FormKind::Iff, "", nullptr, {a, b}); }
PdlFormula pdl_box(PdlProgram p, PdlFormula f) { return intern_form(FormKind::Box, "", p, {f}); }
PdlFormula pdl_dia(PdlProgram p, PdlFormula f) { return intern_form(FormKind::Dia, "", p, {f}); }

std::string print_program(PdlProgram p) {
  switch (p->kind) {
    case ProgKind::Atom:
      return p->label;
    case ProgKind::Seq:
      return "(" + print_program(p->args[0]) + ";" + print_program(p->args[1]) + ")";
    case ProgKind::Union:
      return "(" + print_program(p->args[0]) + "+" + print_program(p->args[1]) + ")";
    case ProgKind::Star:
      return print_program(p->args[0]) + "*";
  }
  return "";
}

std::string print_formula(PdlFormula f) {
  switch (f->kind) {
    case FormKind::True:
      return "true";
    case FormKind::False:
      return "false";
    case FormKind::Atom:
      return f->atom;
    case FormKind::Not:
      return "~" + print_formula(f->args[0]);
    case FormKind::And:
    case FormKind::Or: {
      std::string sep = f->kind == FormKind::And ? " & " : " | ";
      std::string s = "(";
      for (std::size_t j = 0; j < f->args.size(); ++j) s += (j ? sep : "") + print_formula(f->args[j]);
      return s + ")";
    }
    case FormKind::Implies:
      return "(" + print_formula(f->args[0]) + " -> " + print_formula(f->args[1]) + ")";
    case FormKind::Iff:
      return "(" + print_formula(f->args[0]) + " <-> " + print_formula(f->args[1]) + ")";
    case FormKind::Box:
      return "[" + print_program(f->prog) + "]" + print_formula(f->args[0]);
    case FormKind::Dia:
      return "<" + print_program(f->prog) + ">" + print_formula(f->args[0]);
  }
  return "";
}

std::size_t formula_dag_size(PdlFormula f) {
  std::unordered_set<PdlFormula> seen;
  std::vector<PdlFormula> todo{f};
  while (!todo.empty()) {
    auto g = todo.back();
    todo.pop_back();
    if (!seen.insert(g).second) continue;
    for (auto a : g->args) todo.push_back(a);
  }
  return seen.size();
}

namespace {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view s) : s_(s) {}

  PdlFormula formula() {
    auto f = iff();
    expect_end();
    return f;
  }
  PdlProgram program() {
    auto p = prog_union_level();
    expect_end();
    return p;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) { throw SyntaxError(1, pos_ + 1, what); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  bool peek(std::string_view tok) {
    skip();
    return s_.substr(pos_, tok.size()) == tok;
  }
  void expect_end() {
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(s_.substr(pos_, 1)) + "'");
  }
  std::string ident() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (b == pos_) fail(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'" : "unexpected end of formula");
    return std::string(s_.substr(b, pos_ - b));
  }

  PdlFormula iff() {
    auto f = implies();
    while (eat("<->")) f = pdl_iff(f, implies());
    return f;
  }
  PdlFormula implies() {
    auto f = disj();
    if (eat("->")) return pdl_implies(f, implies());
    return f;
  }
  PdlFormula disj() {
    std::vector<PdlFormula> fs{conj()};
    while (eat("|")) fs.push_back(conj());
    return fs.size() == 1 ? fs[0] : pdl_or(std::move(fs));
  }
  PdlFormula conj() {
    std::vector<PdlFormula> fs{unary()};
    while (eat("&")) fs.push_back(unary());
    return fs.size() == 1 ? fs[0] : pdl_and(std::move(fs));
  }
  PdlFormula unary() {
    if (eat("~")) return pdl_not(unary());
    if (eat("[")) {
      auto p = prog_union_level();
      if (!eat("]")) fail("expected ']'");
      return pdl_box(p, unary());
    }
    if (!peek("<->") && eat("<")) {
      auto p = prog_union_level();
      if (!eat(">")) fail("expected '>'");
      return pdl_dia(p, unary());
    }
    if (eat("(")) {
      auto f = iff();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    std::string a = ident();
    if (a == "true") return pdl_true();
    if (a == "false") return pdl_false();
    return pdl_atom(a);
  }

  PdlProgram prog_union_level() {
    auto p = prog_seq_level();
    while (eat("+")) p = prog_union(p, prog_seq_level());
    return p;
  }
  PdlProgram prog_seq_level() {
    auto p = prog_star_level();
    while (eat(";")) p = prog_seq(p, prog_star_level());
    return p;
  }
  PdlProgram prog_star_level() {
    PdlProgram p;
    if (eat("(")) {
      p = prog_union_level();
      if (!eat(")")) fail("expected ')'");
    } else {
      p = prog_atom(ident());
    }
    while (eat("*")) p = prog_star(p);
    return p;
  }
};

}  // namespace

PdlFormula parse_formula(std::string_view text) { return FormulaParser(text).formula(); }
PdlProgram parse_program(std::string_view text) { return FormulaParser(text).program(); }

std::size_t PdlModel::state_index(std::string_view name) const {
  for (std::size_t j = 0; j < states.size(); ++j)
    if (states[j] == name) return j;
  throw Error("unknown state '" + std::string(name) + "'");
}

std::vector<std::string> edge_labels(std::size_t k) {
  if (k == 2) return {"even", "odd"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back("p" + std::to_string(i));
  return out;
}

PdlModel model_of_graph(const ObsGraph& g, const std::vector<Symbol>& extra_atoms) {
  if (g.cobasis == Cobasis::O) throw CobasisMismatch("PDL models are built from N_k or mix graphs");
  PdlModel m;
  m.states = g.names;
  const std::size_t n = g.size();
  std::size_t maxk = 0;
  for (std::size_t v = 0; v < n; ++v) maxk = std::max(maxk, g.arity(v));
  m.labels = edge_labels(g.cobasis == Cobasis::N ? g.k : maxk);
  for (const auto& l : m.labels) m.rels[l].assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < g.arity(v); ++i) m.rels[m.labels[i]][v].push_back(g.succ[v][i]);
    auto& ext = m.atoms[g.out[v]];
    ext.resize(n, false);
    ext[v] = true;
  }
  for (const auto& a : extra_atoms) m.atoms[a].resize(n, false);
  return m;
}

namespace {

using Relation = std::vector<std::vector<char>>;

class ModelChecker {
 public:
  explicit ModelChecker(const PdlModel& m) : m_(m), n_(m.size()) {}

  const std::vector<bool>& eval(PdlFormula f) {
    if (auto it = fmemo_.find(f); it != fmemo_.end()) return it->second;
    std::vector<bool> r(n_, false);
    switch (f->kind) {
      case FormKind::True:
        r.assign(n_, true);
        break;
      case FormKind::False:
        break;
      case FormKind::Atom: {
        auto it = m_.atoms.find(f->atom);
        if (it == m_.atoms.end()) throw UnknownAtom("atom '" + f->atom + "' is not declared in the model");
        r = it->second;
        break;
      }
      case FormKind::Not: {
        const auto& a = eval(f->args[0]);
        for (std::size_t x = 0; x < n_; ++x) r[x] = !a[x];
        break;
      }
      case FormKind::And:
        r.assign(n_, true);
        for (auto g : f->args) {
          const auto& a = eval(g);
          for (std::size_t x = 0; x < n_; ++x) r[x] = r[x] && a[x];
        }
        break;
      case FormKind::Or:
        for (auto g : f->args) {
          const auto& a = eval(g);
          for (std::size_t x = 0; x < n_; ++x) r[x] = r[x] || a[x];
        }
        break;
      case FormKind::Implies: {
        auto a = eval(f->args[0]);
        const auto& b = eval(f->args[1]);
        for (std::size_t x = 0; x < n_; ++x) r[x] = !a[x] || b[x];
        break;
      }
      case FormKind::Iff: {
        auto a = eval(f->args[0]);
        const auto& b = eval(f->args[1]);
        for (std::size_t x = 0; x < n_; ++x) r[x] = a[x] == b[x];
        break;
      }
      case FormKind::Box:
      case FormKind::Dia: {
        const bool box = f->kind == FormKind::Box;
        auto a = eval(f->args[0]);
        const Relation& R = rel(f->prog);
        for (std::size_t x = 0; x < n_; ++x) {
          bool v = box;
          for (std::size_t y = 0; y < n_; ++y)
            if (R[x][y] && a[y] != box) {
              v = !box;
              break;
            }
          r[x] = v;
        }
        break;
      }
    }
    return fmemo_.emplace(f, std::move(r)).first->second;
  }

 private:
  const PdlModel& m_;
  std::size_t n_;
  std::unordered_map<PdlFormula, std::vector<bool>> fmemo_;
  std::unordered_map<PdlProgram, Relation> pmemo_;

  const Relation& rel(PdlProgram p) {
    if (auto it = pmemo_.find(p); it != pmemo_.end()) return it->second;
    Relation r(n_, std::vector<char>(n_, 0));
    switch (p->kind) {
      case ProgKind::Atom: {
        auto it = m_.rels.find(p->label);
        if (it == m_.rels.end()) throw UnknownLabel("program label '" + p->label + "' is not a relation of the model");
        for (std::size_t x = 0; x < n_; ++x)
          for (auto y : it->second[x]) r[x][y] = 1;
        break;
      }
      case ProgKind::Seq: {
        Relation a = rel(p->args[0]);
        const Relation& b = rel(p->args[1]);
        for (std::size_t x = 0; x < n_; ++x)
          for (std::size_t y = 0; y < n_; ++y)
            if (a[x][y])
              for (std::size_t z = 0; z < n_; ++z) r[x][z] |= b[y][z];
        break;
      }
      case ProgKind::Union: {
        Relation a = rel(p->args[0]);
        const Relation& b = rel(p->args[1]);
        for (std::size_t x = 0; x < n_; ++x)
          for (std::size_t y = 0; y < n_; ++y) r[x][y] = a[x][y] | b[x][y];
        break;
      }
      case ProgKind::Star: {
        r = rel(p->args[0]);
        for (std::size_t x = 0; x < n_; ++x) r[x][x] = 1;
        for (std::size_t z = 0; z < n_; ++z)
          for (std::size_t x = 0; x < n_; ++x)
            if (r[x][z])
              for (std::size_t y = 0; y < n_; ++y) r[x][y] |= r[z][y];
        break;
      }
    }
    return pmemo_.emplace(p, std::move(r)).first->second;
  }
};

// phi^0 for every state: conjunction of the atoms it satisfies and the negations of the rest.
std::vector<PdlFormula> atom_descriptions(const PdlModel& m) {
  std::vector<PdlFormula> out;
  for (std::size_t a = 0; a < m.size(); ++a) {
    std::vector<PdlFormula> lits;
    for (const auto& [sym, ext] : m.atoms) lits.push_back(ext[a] ? pdl_atom(sym) : pdl_not(pdl_atom(sym)));
    out.push_back(pdl_and(std::move(lits)));
  }
  return out;
}

// Diamonds to every successor's formula and a box over their disjunction, per label.
std::vector<PdlFormula> successor_clauses(const PdlModel& m, std::size_t a, const std::vector<PdlFormula>& level) {
  std::vector<PdlFormula> parts;
  for (const auto& l : m.labels) {
    PdlProgram p = prog_atom(l);
    std::vector<PdlFormula> alts;
    for (auto b : m.rels.at(l)[a]) {
      parts.push_back(pdl_dia(p, level[b]));
      alts.push_back(level[b]);
    }
    parts.push_back(pdl_box(p, pdl_or(std::move(alts))));
  }
  return parts;
}

std::vector<PdlFormula> next_level(const PdlModel& m, const std::vector<PdlFormula>& base,
                                   const std::vector<PdlFormula>& level) {
  std::vector<PdlFormula> out;
  for (std::size_t a = 0; a < m.size(); ++a) {
    auto parts = successor_clauses(m, a, level);
    parts.push_back(base[a]);
    out.push_back(pdl_and(std::move(parts)));
  }
  return out;
}

std::vector<std::size_t> partition_of(const std::vector<PdlFormula>& level) {
  std::unordered_map<PdlFormula, std::size_t> cls;
  std::vector<std::size_t> out;
  for (auto f : level) out.push_back(cls.emplace(f, cls.size()).first->second);
  return out;
}

}  // namespace

std::vector<bool> eval(const PdlModel& m, PdlFormula f) {
  ModelChecker mc(m);
  return mc.eval(f);
}

PdlFormula canonical_phi(const PdlModel& m, std::size_t a, std::size_t h) {
  auto base = atom_descriptions(m);
  auto level = base;
  for (std::size_t j = 0; j < h; ++j) level = next_level(m, base, level);
  return level.at(a);
}

std::size_t stable_height(const PdlModel& m) {
  auto base = atom_descriptions(m);
  auto level = base;
  auto part = partition_of(level);
  for (std::size_t h = 0;; ++h) {
    auto nxt = next_level(m, base, level);
    auto np = partition_of(nxt);
    // Refinement only splits classes, so equal class counts mean the partition is stable.
    if (*std::max_element(np.begin(), np.end()) == *std::max_element(part.begin(), part.end())) return h;
    if (h > m.size()) throw InternalNonTermination("partition refinement exceeded the number of states");
    level = std::move(nxt);
    part = std::move(np);
  }
}

PdlFormula characterize(const PdlModel& m, std::size_t x) {
  if (m.size() == 0) throw Error("empty model");
  const std::size_t hstar = stable_height(m);
  auto base = atom_descriptions(m);
  auto level = base;
  for (std::size_t j = 0; j < hstar; ++j) level = next_level(m, base, level);
  std::vector<PdlFormula> psis;
  for (std::size_t a = 0; a < m.size(); ++a) psis.push_back(pdl_implies(level[a], pdl_and(successor_clauses(m, a, level))));
  if (m.labels.empty()) return pdl_and({level[x], pdl_and(std::move(psis))});
  PdlProgram any = prog_atom(m.labels[0]);
  for (std::size_t j = 1; j < m.labels.size(); ++j) any = prog_union(any, prog_atom(m.labels[j]));
  return pdl_and({level.at(x), pdl_box(prog_star(any), pdl_and(std::move(psis)))});
}

}  // namespace zs
