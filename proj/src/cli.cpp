#include "zipstream/cli.hpp"

#include <algorithm>
#include <functional>

#include <CLI11.hpp>

#include "zipstream/analysis.hpp"
#include "zipstream/automata.hpp"
#include "zipstream/fractran.hpp"
#include "zipstream/graphs.hpp"
#include "zipstream/io.hpp"
#include "zipstream/parallel.hpp"
#include "zipstream/pdl.hpp"
#include "zipstream/transform.hpp"

namespace zs {

namespace {

constexpr int kOk = 0, kNegative = 1, kUsage = 2, kFailure = 3;

std::string join_symbols(const std::vector<Symbol>& p) {
  bool narrow = std::all_of(p.begin(), p.end(), [](const Symbol& s) { return s.size() == 1; });
  std::string s;
  for (std::size_t j = 0; j < p.size(); ++j) s += (narrow || j == 0 ? "" : " ") + p[j];
  return s;
}

bool has_proj(const ZipSpec& s) {
  return std::any_of(s.equations().begin(), s.equations().end(),
                     [](const Equation& e) { return contains_kind(e.rhs, TermKind::Proj); });
}

ObsGraph graph_of_spec(const ZipSpec& s, RewriteBudget b) {
  if (has_proj(s)) throw PiDialectUnsupported("observation graphs need a projection-free specification");
  if (is_graph_ready(s)) return build_ngraph(s, b);
  return build_ngraph(flatten(s), b);
}

bool is_json_path(const std::string& p) { return p.size() >= 5 && p.compare(p.size() - 5, 5, ".json") == 0; }

// A graph given either as JSON or as a specification file.
ObsGraph load_graph(const std::string& path, RewriteBudget b) {
  if (is_json_path(path)) return graph_from_json(load_json(path));
  return graph_of_spec(load_spec(path), b);
}

std::string cycle_text(const LeftmostCycle& c) {
  std::string s;
  for (const auto& v : c.vars) s += v + " -> ";
  return s + c.vars.front();
}

std::size_t state_arg(const PdlModel& m, const ObsGraph& g, const std::string& s) {
  if (s.empty()) return g.root;
  for (std::size_t j = 0; j < m.size(); ++j)
    if (m.states[j] == s) return j;
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    std::size_t j = std::stoul(s);
    if (j < m.size()) return j;
  }
  throw Error("unknown state '" + s + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stream specifications built from cons, zip and projections", "zipstream"};
  app.require_subcommand(1);
  std::uint64_t budget = RewriteBudget{}.max_steps;
  app.add_option("--budget", budget, "rewrite step budget")->check(CLI::PositiveNumber);

  std::function<int()> action;
  auto rb = [&] { return RewriteBudget{budget}; };

  std::string file, file2, format = "json", cobasis, formula, state, determiner;
  std::uint64_t count = 0, max_steps = 1000000;
  std::vector<std::uint64_t> proj;
  bool minimized = false;
  std::optional<std::uint64_t> prefix_len;

  auto* check = app.add_subcommand("check", "productivity and leftmost cycles");
  check->add_option("FILE", file)->required();
  check->callback([&] {
    action = [&] {
      ZipSpec s = load_spec(file);
      if (has_proj(s)) {
        auto r = check_productivity(s, rb());
        out << (r.productive ? "productive" : "not productive") << " (bounded check: " << r.probed << " symbols)\n";
        if (!r.note.empty()) out << r.note << "\n";
        return r.productive ? kOk : kNegative;
      }
      auto rep = leftmost_cycles(s);
      bool productive = std::all_of(rep.cycles.begin(), rep.cycles.end(), [](const LeftmostCycle& c) { return c.guarded; });
      out << (productive ? "productive" : "not productive") << "\n";
      for (const auto& c : rep.cycles) {
        out << (c.guarded ? "guarded cycle: " : "unguarded cycle: ") << cycle_text(c) << "\n";
        out << "  path:";
        for (Term t : c.path) out << " " << print_term(t);
        out << "\n";
      }
      return productive ? kOk : kNegative;
    };
  });

  auto* solve = app.add_subcommand("solve", "enumerate the productive specifications of all solutions");
  solve->add_option("FILE", file)->required();
  solve->callback([&] {
    action = [&] {
      auto sols = solve_all(load_spec(file));
      if (sols.empty()) out << "no solutions: the alphabet is empty\n";
      for (std::size_t j = 0; j < sols.size(); ++j) {
        out << "# solution " << j + 1 << " of " << sols.size() << "\n" << print_spec(sols[j]);
      }
      return kOk;
    };
  });

  auto* evalc = app.add_subcommand("eval", "print a prefix of the root stream");
  evalc->add_option("FILE", file)->required();
  evalc->add_option("-n", count, "number of symbols")->required();
  evalc->add_option("--proj", proj, "project: i k")->expected(2);
  evalc->callback([&] {
    action = [&] {
      ZipSpec s = load_spec(file);
      Prefix p;
      if (!proj.empty()) {
        if (proj[1] == 0) throw ArityZero("projection modulus must be positive");
        p = has_proj(s) ? [&] {
          StreamIndexer ix(s, rb());
          Prefix q;
          for (std::uint64_t j = 0; j < count; ++j) q.push_back(ix.at(proj[1] * j + proj[0]));
          return q;
        }()
                        : project_prefix(s, proj[0], proj[1], count, rb());
      } else {
        p = stream_prefix(s, count, rb());
      }
      out << join_symbols(p) << "\n";
      return kOk;
    };
  });

  auto* flat = app.add_subcommand("flatten", "equivalent flat specification");
  flat->add_option("FILE", file)->required();
  flat->callback([&] {
    action = [&] {
      out << print_spec(flatten(load_spec(file)));
      return kOk;
    };
  });

  auto* graph = app.add_subcommand("graph", "observation graph of a specification");
  graph->add_option("FILE", file)->required();
  graph->add_option("--cobasis", cobasis)->check(CLI::IsMember({"n", "o", "mix"}));
  graph->add_flag("--minimize", minimized);
  graph->add_option("--format", format)->check(CLI::IsMember({"dot", "json"}));
  graph->callback([&] {
    action = [&] {
      ObsGraph g = graph_of_spec(load_spec(file), rb());
      if (minimized) g = minimize(g);
      if (cobasis == "o") {
        if (g.cobasis != Cobasis::N) throw CobasisMismatch("O_k graphs are built from zip-k specifications");
        g = ngraph_to_ograph(g);
      } else if (cobasis == "n" && g.cobasis != Cobasis::N) {
        throw CobasisMismatch("a zip-mix specification has no N_k graph");
      } else if (cobasis == "mix") {
        g.cobasis = Cobasis::Mix;
        g.k = 0;
      }
      out << (format == "dot" ? graph_to_dot(g) : graph_to_json(g).dump(2) + "\n");
      return kOk;
    };
  });

  auto* equiv = app.add_subcommand("equiv", "decide equivalence of two specifications");
  equiv->add_option("FILE1", file)->required();
  equiv->add_option("FILE2", file2)->required();
  equiv->add_option("--prefix", prefix_len, "compare this many symbols instead of deciding");
  equiv->callback([&] {
    action = [&] {
      ZipSpec a = load_spec(file), b = load_spec(file2);
      auto bounded = [&](std::uint64_t n) {
        auto r = prefix_compare(a, b, n, rb());
        if (r.equal) {
          out << "equal up to " << n << "\n";
          return kOk;
        }
        out << "different at index " << *r.index << ": " << r.left << " vs " << r.right << "\n";
        return kNegative;
      };
      if (prefix_len) return bounded(*prefix_len);
      if (a.dialect.kind != DialectKind::ZipK || b.dialect.kind != DialectKind::ZipK) {
        out << "note: equivalence is only decided for zip-k specifications; comparing 256 symbols\n";
        return bounded(256);
      }
      auto rep = equivalent(a, b, rb());
      if (rep.equivalent) {
        out << "equivalent\n";
        if (rep.witnesses.size() == 1 && rep.solutions1 == 1 && rep.solutions2 == 1) {
          out << "bisimulation:\n";
          for (auto [x, y] : rep.witnesses[0].relation)
            out << "  " << rep.graph1.names[x] << " ~ " << rep.graph2.names[y] << "\n";
        }
      } else {
        out << "not equivalent\n";
        for (const auto& w : rep.witnesses) {
          if (!w.index) continue;
          // The witness index need not be the least one; search below it on the compared graphs.
          if (rep.solutions1 == 1 && rep.solutions2 == 1) {
            auto first = prefix_compare(rep.graph1, rep.graph2, *w.index + 1);
            out << "first difference at index " << *first.index << ": " << first.left << " vs " << first.right << "\n";
          } else {
            out << "solutions differ at index " << *w.index << ": " << w.left << " vs " << w.right << "\n";
          }
          break;
        }
      }
      if (!rep.note.empty()) out << "note: " << rep.note << "\n";
      return rep.equivalent ? kOk : kNegative;
    };
  });

  auto* dfao = app.add_subcommand("dfao", "automaton conversions");
  dfao->require_subcommand(1);
  auto emit_automaton = [&](const Automaton& a) { out << (format == "dot" ? automaton_to_dot(a) : automaton_to_json(a).dump(2) + "\n"); };
  auto* from_graph = dfao->add_subcommand("from-graph", "graph (JSON or specification) to automaton");
  from_graph->add_option("FILE", file)->required();
  from_graph->add_option("--format", format)->check(CLI::IsMember({"dot", "json"}));
  from_graph->callback([&] {
    action = [&] {
      emit_automaton(graph_to_dfao(load_graph(file, rb())));
      return kOk;
    };
  });
  auto* to_graph = dfao->add_subcommand("to-graph", "zero-invariant automaton to observation graph");
  to_graph->add_option("FILE", file)->required();
  to_graph->add_option("--format", format)->check(CLI::IsMember({"dot", "json"}));
  to_graph->callback([&] {
    action = [&] {
      ObsGraph g = dfao_to_graph(automaton_from_json(load_json(file)));
      out << (format == "dot" ? graph_to_dot(g) : graph_to_json(g).dump(2) + "\n");
      return kOk;
    };
  });
  auto* zinv = dfao->add_subcommand("zero-invariant", "equivalent automaton invariant under leading zeros");
  zinv->add_option("FILE", file)->required();
  zinv->add_option("--format", format)->check(CLI::IsMember({"dot", "json"}));
  zinv->callback([&] {
    action = [&] {
      emit_automaton(make_zero_invariant(automaton_from_json(load_json(file))));
      return kOk;
    };
  });

  auto* mix = app.add_subcommand("mix", "variadic numeration and mix-automatic streams");
  mix->require_subcommand(1);
  auto* repr = mix->add_subcommand("repr", "digits of N under a base determiner");
  repr->add_option("N", count)->required();
  repr->add_option("--determiner", determiner, "automaton JSON; its per-state bases are used")->required();
  repr->callback([&] {
    action = [&] {
      Automaton p = automaton_from_json(load_json(determiner));
      DigitWord w = repr_mix(count, p);
      out << (w.empty() ? "(empty)" : digits_to_string(w)) << "\n";
      return kOk;
    };
  });
  auto* gen = mix->add_subcommand("gen", "prefix generated by an automaton");
  gen->add_option("FILE", file)->required();
  gen->add_option("-n", count)->required();
  gen->callback([&] {
    action = [&] {
      out << join_symbols(generate_range(automaton_from_json(load_json(file)), 0, count)) << "\n";
      return kOk;
    };
  });

  auto* pdl = app.add_subcommand("pdl", "dynamic logic over observation graphs");
  pdl->require_subcommand(1);
  auto* peval = pdl->add_subcommand("eval", "states satisfying a formula");
  peval->add_option("GRAPH", file)->required();
  peval->add_option("-f", formula)->required();
  peval->callback([&] {
    action = [&] {
      ObsGraph g = load_graph(file, rb());
      PdlModel m = model_of_graph(g);
      auto sat = eval(m, parse_formula(formula));
      for (std::size_t x = 0; x < m.size(); ++x)
        if (sat[x]) out << m.states[x] << "\n";
      out << "root " << (sat[g.root] ? "satisfies" : "does not satisfy") << " the formula\n";
      return sat[g.root] ? kOk : kNegative;
    };
  });
  auto* pchar = pdl->add_subcommand("characterize", "sentence true exactly at states bisimilar to STATE");
  pchar->add_option("GRAPH", file)->required();
  pchar->add_option("-s", state, "state name or index (default: root)");
  pchar->callback([&] {
    action = [&] {
      ObsGraph g = load_graph(file, rb());
      PdlModel m = model_of_graph(g);
      out << print_formula(characterize(m, state_arg(m, g, state))) << "\n";
      return kOk;
    };
  });

  auto* fr = app.add_subcommand("fractran", "Fractran programs with output");
  fr->require_subcommand(1);
  auto* frun = fr->add_subcommand("run", "output of the program on input N");
  frun->add_option("FILE", file)->required();
  frun->add_option("-n", count)->required()->check(CLI::PositiveNumber);
  frun->add_option("--max-steps", max_steps);
  frun->callback([&] {
    action = [&] {
      auto r = run_output(load_fractran(file), count, max_steps);
      if (r.kind != RunResult::Kind::Output) {
        out << "timeout after " << r.steps << " steps\n";
        return kNegative;
      }
      out << r.out << "\n";
      return kOk;
    };
  });
  auto* fgad = fr->add_subcommand("gadget", "the two halting-gadget programs");
  fgad->add_option("FILE", file)->required();
  fgad->callback([&] {
    action = [&] {
      Gadget g = build_gadget(load_fractran(file));
      out << "c = " << g.c << "\nz2 = " << g.z2 << "\nz1 = " << g.z1 << "\nprimes =";
      for (const auto& p : g.primes) out << " " << p;
      out << "\n# F0\n" << print_fractran(g.f0) << "# F1\n" << print_fractran(g.f1);
      return kOk;
    };
  });
  auto* fspec = fr->add_subcommand("to-spec", "zip-pi specification of a decreasing program");
  fspec->add_option("FILE", file)->required();
  fspec->callback([&] {
    action = [&] {
      out << print_spec(to_zip_pi_spec(load_fractran(file)));
      return kOk;
    };
  });
  auto* fprobe = fr->add_subcommand("probe", "compare the gadget streams on N positions");
  fprobe->add_option("FILE", file)->required();
  fprobe->add_option("-n", count)->required();
  fprobe->callback([&] {
    action = [&] {
      auto r = gadget_equiv_probe(load_fractran(file), count, rb());
      if (r.agree) {
        out << "agree up to " << count << "\n";
        return kOk;
      }
      out << "differ at index " << *r.index << ": " << r.left << " vs " << r.right << "\n";
      out << "the program halts on 2\n";
      return kNegative;
    };
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace zs
