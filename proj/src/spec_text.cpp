#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "zipstream/core.hpp"

namespace zs {
namespace {

enum class Tok { Word, Colon, LParen, RParen, Comma, Equals, End, Newline };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t p = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
      if (src[p] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++p;
    }
  };
  while (p < src.size()) {
    char c = src[p];
    if (c == '#') {
      while (p < src.size() && src[p] != '\n') advance(1);
      continue;
    }
    if (c == '\n' || c == ';') {
      out.push_back({Tok::Newline, std::string(1, c), line, col});
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    std::size_t l = line, cl = col;
    if (word_char(c)) {
      std::size_t q = p;
      while (q < src.size() && word_char(src[q])) ++q;
      while (q < src.size() && src[q] == '\'') ++q;
      out.push_back({Tok::Word, std::string(src.substr(p, q - p)), l, cl});
      advance(q - p);
      continue;
    }
    Tok k;
    switch (c) {
      case ':': k = Tok::Colon; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case '=': k = Tok::Equals; break;
      default:
        throw SyntaxError(l, cl, std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, std::string(1, c), l, cl});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  ZipSpec run(const ParseOptions& opts) {
    ZipSpec s;
    std::optional<std::string> root;
    std::optional<Dialect> declared;
    std::vector<std::pair<std::string, Token>> uses;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Newline) {
        ++pos_;
        continue;
      }
      const Token& head = expect(Tok::Word, "a declaration or equation");
      if (head.text == "alphabet" && peek().kind == Tok::Word) {
        while (peek().kind == Tok::Word) {
          std::string sym = next().text;
          if (sym.find('\'') != std::string::npos) fail(t_[pos_ - 1], "symbol may not contain a prime");
          if (std::find(s.alphabet.begin(), s.alphabet.end(), sym) == s.alphabet.end()) s.alphabet.push_back(sym);
        }
        s.alphabet_declared = true;
      } else if (head.text == "root" && peek().kind == Tok::Word) {
        root = next().text;
      } else if (head.text == "dialect" && peek().kind == Tok::Word) {
        declared = parse_dialect();
      } else {
        expect(Tok::Equals, "'='");
        Term rhs = parse_term(uses);
        if (s.has(head.text)) throw DuplicateEquation("duplicate equation for " + head.text);
        s.add(head.text, rhs);
      }
      if (peek().kind != Tok::End) expect(Tok::Newline, "end of line");
    }
    if (s.size() == 0) throw SyntaxError(1, 1, "no equations");
    for (const auto& [name, tok] : uses)
      if (!s.has(name)) throw UndefinedVariable("undefined variable " + name + " at " + std::to_string(tok.line) + ":" + std::to_string(tok.col));
    s.root = root ? *root : s.equations().front().var;
    if (!s.has(s.root)) throw UndefinedVariable("undefined root " + s.root);
    s.refresh();
    bool has_proj = s.dialect.kind == DialectKind::ZipPi;
    if (declared) {
      if (has_proj && declared->kind != DialectKind::ZipPi)
        throw ProjInNonPiDialect("projection in a " + dialect_name(*declared) + " specification");
      s.dialect = *declared;
    }
    if (has_proj && opts.forbid_proj) throw ProjInNonPiDialect("projections are not permitted here");
    return s;
  }

 private:
  Dialect parse_dialect() {
    const Token& w = next();
    if (w.text == "zipk") {
      const Token& n = expect(Tok::Word, "arity");
      return {DialectKind::ZipK, to_nat(n)};
    }
    if (w.text == "zipmix") return {DialectKind::ZipMix, 0};
    if (w.text == "zippi") return {DialectKind::ZipPi, 0};
    fail(w, "expected zipk, zipmix or zippi");
  }

  Term parse_term(std::vector<std::pair<std::string, Token>>& uses) {
    const Token& w = expect(Tok::Word, "a term");
    if (peek().kind == Tok::Colon) {
      ++pos_;
      if (w.text.find('\'') != std::string::npos) fail(w, "symbol may not contain a prime");
      return mk_cons(w.text, parse_term(uses));
    }
    if (w.text == "zip" && peek().kind == Tok::LParen) {
      ++pos_;
      std::vector<Term> args;
      if (peek().kind == Tok::RParen) throw ArityZero("zip with no arguments at " + std::to_string(w.line) + ":" + std::to_string(w.col));
      args.push_back(parse_term(uses));
      while (peek().kind == Tok::Comma) {
        ++pos_;
        args.push_back(parse_term(uses));
      }
      expect(Tok::RParen, "')'");
      return mk_zip(std::move(args));
    }
    if (w.text == "proj" && peek().kind == Tok::LParen) {
      ++pos_;
      std::uint64_t i = to_nat(expect(Tok::Word, "index"));
      expect(Tok::Comma, "','");
      const Token& kt = expect(Tok::Word, "modulus");
      std::uint64_t k = to_nat(kt);
      if (k == 0) throw ArityZero("proj modulus 0 at " + std::to_string(kt.line) + ":" + std::to_string(kt.col));
      expect(Tok::Comma, "','");
      Term inner = parse_term(uses);
      expect(Tok::RParen, "')'");
      return mk_proj(i, k, inner);
    }
    uses.emplace_back(w.text, w);
    return mk_var(w.text);
  }

  std::uint64_t to_nat(const Token& t) {
    if (t.text.empty() || !std::all_of(t.text.begin(), t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail(t, "expected a natural number");
    try {
      return std::stoull(t.text);
    } catch (const std::exception&) {
      fail(t, "number out of range");
    }
  }

  const Token& peek() const { return t_[pos_]; }
  const Token& next() { return t_[pos_++]; }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what + (peek().text.empty() ? "" : ", found '" + printable(peek().text) + "'"));
    return t_[pos_++];
  }
  static std::string printable(const std::string& s) { return s == "\n" ? "newline" : s; }
  [[noreturn]] void fail(const Token& t, const std::string& msg) { throw SyntaxError(t.line, t.col, msg); }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

}  // namespace

ZipSpec parse_spec(std::string_view text, const ParseOptions& opts) { return Parser(lex(text)).run(opts); }

ZipSpec load_spec(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str(), opts);
}

std::string print_spec(const ZipSpec& s) {
  std::string out;
  if (s.alphabet_declared) {
    out += "alphabet";
    for (const auto& a : s.alphabet) out += " " + a;
    out += "\n";
  }
  if (s.dialect != s.inferred_dialect()) {
    switch (s.dialect.kind) {
      case DialectKind::ZipK: out += "dialect zipk " + std::to_string(s.dialect.k) + "\n"; break;
      case DialectKind::ZipMix: out += "dialect zipmix\n"; break;
      case DialectKind::ZipPi: out += "dialect zippi\n"; break;
    }
  }
  if (s.size() > 0 && s.root != s.equations().front().var) out += "root " + s.root + "\n";
  for (const auto& e : s.equations()) out += e.var + " = " + print_term(e.rhs) + "\n";
  return out;
}

namespace {
void check_term(Term t, const ZipSpec& s, std::vector<Diagnostic>& out) {
  switch (t->kind) {
    case TermKind::Var:
      if (!s.has(t->name)) out.push_back({Diagnostic::Kind::UndefinedVariable, "undefined variable " + t->name});
      break;
    case TermKind::Cons:
      if (s.alphabet_declared && std::find(s.alphabet.begin(), s.alphabet.end(), t->name) == s.alphabet.end())
        out.push_back({Diagnostic::Kind::AlphabetInconsistency, "symbol " + t->name + " is not in the declared alphabet"});
      break;
    case TermKind::Zip:
      if (s.dialect.kind == DialectKind::ZipK && t->k != s.dialect.k)
        out.push_back({Diagnostic::Kind::DialectViolation,
                       "zip of arity " + std::to_string(t->k) + " in a " + dialect_name(s.dialect) + " specification"});
      break;
    case TermKind::Proj:
      if (t->k == 0) out.push_back({Diagnostic::Kind::ZeroArity, "proj with modulus 0"});
      if (s.dialect.kind != DialectKind::ZipPi)
        out.push_back({Diagnostic::Kind::DialectViolation, "projection in a " + dialect_name(s.dialect) + " specification"});
      break;
    case TermKind::Tl:
      out.push_back({Diagnostic::Kind::DialectViolation, "tl is internal and may not appear in a specification"});
      break;
  }
  for (Term a : t->args) check_term(a, s, out);
}
}  // namespace

std::vector<Diagnostic> validate(const ZipSpec& s) {
  std::vector<Diagnostic> out;
  if (!s.has(s.root)) {
    out.push_back({Diagnostic::Kind::UndefinedVariable, "root " + s.root + " has no equation"});
    return out;
  }
  if (s.alphabet.empty()) out.push_back({Diagnostic::Kind::AlphabetInconsistency, "alphabet is empty"});
  for (const auto& e : s.equations()) check_term(e.rhs, s, out);

  std::vector<std::string> seen{s.root};
  for (std::size_t j = 0; j < seen.size(); ++j) {
    if (!s.has(seen[j])) continue;
    std::vector<std::string> next;
    collect_vars(s.rhs(seen[j]), next);
    for (auto& v : next)
      if (std::find(seen.begin(), seen.end(), v) == seen.end()) seen.push_back(v);
  }
  for (const auto& e : s.equations())
    if (std::find(seen.begin(), seen.end(), e.var) == seen.end())
      out.push_back({Diagnostic::Kind::UnreachableVariable, "variable " + e.var + " is unreachable from root " + s.root});
  return out;
}

}  // namespace zs
