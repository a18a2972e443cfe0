#include "zipstream/fractran.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/integer/common_factor.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

namespace zs {

bool FractranProgram::decreasing() const {
  return std::all_of(fractions.begin(), fractions.end(), [](const Fraction& f) { return f.out || f.p < f.q; });
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

BigNat parse_nat(const std::string& s, std::size_t line) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw SyntaxError(line, 1, "expected a natural number, got '" + s + "'");
  BigNat v(s);
  if (v == 0) throw SyntaxError(line, 1, "fraction components must be positive");
  return v;
}

}  // namespace

FractranProgram parse_fractran(const std::string& text) {
  FractranProgram f;
  std::istringstream in(text);
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    Fraction fr;
    auto arrow = s.find("->");
    if (arrow != std::string::npos) {
      std::string sym = trim(s.substr(arrow + 2));
      if (sym.empty() || !std::all_of(sym.begin(), sym.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }))
        throw SyntaxError(line, arrow + 3, "expected an output symbol after '->'");
      fr.out = sym;
      s = trim(s.substr(0, arrow));
    }
    auto slash = s.find('/');
    if (slash == std::string::npos) throw SyntaxError(line, 1, "expected p/q");
    fr.p = parse_nat(trim(s.substr(0, slash)), line);
    fr.q = parse_nat(trim(s.substr(slash + 1)), line);
    f.fractions.push_back(std::move(fr));
  }
  return f;
}

FractranProgram load_fractran(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fractran(ss.str());
}

std::string print_fractran(const FractranProgram& f) {
  std::string s;
  for (const auto& fr : f.fractions) {
    s += fr.p.str() + "/" + fr.q.str();
    if (fr.out) s += " -> " + *fr.out;
    s += "\n";
  }
  return s;
}

FractranState step(const FractranProgram& f, const BigNat& n) {
  FractranState st;
  for (const auto& fr : f.fractions) {
    BigNat m = n * fr.p;
    if (m % fr.q != 0) continue;
    if (fr.out) {
      st.kind = FractranState::Kind::Output;
      st.out = *fr.out;
    } else {
      st.value = m / fr.q;
    }
    return st;
  }
  st.kind = FractranState::Kind::Halted;
  st.out = kBottom;
  return st;
}

RunResult run_output(const FractranProgram& f, const BigNat& n, std::uint64_t max_steps, const std::atomic<bool>* cancel) {
  RunResult r;
  BigNat v = n;
  for (r.steps = 0; r.steps < max_steps; ++r.steps) {
    if (cancel && cancel->load(std::memory_order_relaxed)) {
      r.kind = RunResult::Kind::Cancelled;
      return r;
    }
    auto st = step(f, v);
    if (st.kind != FractranState::Kind::Value) {
      r.out = st.out;
      return r;
    }
    v = std::move(st.value);
  }
  r.kind = RunResult::Kind::Timeout;
  return r;
}

BigNat next_prime_above(const BigNat& n) {
  BigNat c = n + 1;
  if (c <= 2) return 2;
  if (c % 2 == 0) ++c;
  while (!boost::multiprecision::miller_rabin_test(c, 25)) c += 2;
  return c;
}

namespace {

void add_prime_factors(BigNat n, std::set<BigNat>& out) {
  for (BigNat d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      out.insert(d);
      n /= d;
    }
  if (n > 1) out.insert(n);
}

}  // namespace

Gadget build_gadget(const FractranProgram& f) {
  if (f.fractions.empty()) throw Error("gadget needs a non-empty program");
  for (const auto& fr : f.fractions)
    if (fr.out) throw Error("gadget input must not carry output annotations");
  Gadget g;
  BigNat bound = 1;
  std::set<BigNat> primes;
  for (const auto& fr : f.fractions) {
    bound *= fr.p * fr.q;
    add_prime_factors(fr.p, primes);
    add_prime_factors(fr.q, primes);
  }
  g.primes.assign(primes.begin(), primes.end());
  g.c = next_prime_above(bound);
  g.z2 = next_prime_above(bound);
  if (g.z2 == g.c) g.z2 = next_prime_above(g.c);
  g.z1 = next_prime_above(std::max<BigNat>(g.z2, 2 * g.c));

  auto& F = g.f0.fractions;
  for (const auto& fr : f.fractions) F.push_back({fr.p, fr.q * g.z2, std::nullopt});  // simulate
  for (const auto& a : g.primes) F.push_back({1, a, std::nullopt});                  // cleanup
  F.push_back({1, g.c * g.z2, kChiA});                                               // halted
  F.push_back({1, g.c, std::nullopt});
  F.push_back({g.z2, g.z1 * g.z1, std::nullopt});  // initialization
  F.push_back({2 * g.c, g.z1, std::nullopt});
  F.push_back({1, 1, kChiB});  // did not halt
  g.f1 = g.f0;
  auto& F1 = g.f1.fractions;
  F1.erase(F1.end() - 3, F1.end() - 1);
  return g;
}

ZipSpec to_zip_pi_spec(const FractranProgram& f, std::uint64_t max_d) {
  if (!f.decreasing()) throw NotDecreasing("every fraction without output needs p < q");
  BigNat d = 1;
  for (const auto& fr : f.fractions) d = boost::integer::lcm(d, fr.q);
  if (d > max_d) throw Error("zip arity " + d.str() + " exceeds the limit " + std::to_string(max_d));
  const std::uint64_t dd = d.convert_to<std::uint64_t>();

  ZipSpec s;
  std::vector<Term> args;
  for (std::uint64_t n = 1; n <= dd; ++n) args.push_back(mk_var("X" + std::to_string(n)));
  s.add("X0", mk_zip(std::move(args)));
  const Term root = mk_var("X0");
  for (std::uint64_t n = 1; n <= dd; ++n) {
    const std::string x = "X" + std::to_string(n);
    const Fraction* hit = nullptr;
    for (const auto& fr : f.fractions)
      if ((BigNat(n) * fr.p) % fr.q == 0) {
        hit = &fr;
        break;
      }
    if (!hit) {
      s.add(x, mk_cons(kBottom, mk_var(x)));
    } else if (hit->out) {
      s.add(x, mk_cons(*hit->out, mk_var(x)));
    } else {
      std::uint64_t b = (BigNat(n) * hit->p / hit->q).convert_to<std::uint64_t>();
      std::uint64_t pk = (d * hit->p / hit->q).convert_to<std::uint64_t>();
      s.add(x, mk_proj(b - 1, pk, root));
    }
  }
  s.root = "X0";
  s.refresh();
  return s;
}

ProbeResult gadget_equiv_probe(const FractranProgram& f, std::uint64_t n, RewriteBudget b) {
  Gadget g = build_gadget(f);
  StreamIndexer a(to_zip_pi_spec(g.f0), b), c(to_zip_pi_spec(g.f1), b);
  ProbeResult r;
  for (std::uint64_t j = 0; j < n; ++j) {
    Symbol x = a.at(j), y = c.at(j);
    r.compared = j + 1;
    if (x != y) {
      r.agree = false;
      r.index = j;
      r.left = x;
      r.right = y;
      return r;
    }
  }
  return r;
}

}  // namespace zs
