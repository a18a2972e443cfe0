#include "zipstream/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace zs {

using json = nlohmann::ordered_json;

namespace {

std::string id_key(const json& id) {
  if (id.is_string()) return id.get<std::string>();
  if (id.is_number_unsigned() || id.is_number_integer()) return std::to_string(id.get<long long>());
  throw FormatError("node ids must be strings or integers");
}

const json& field(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) throw FormatError(std::string("missing field '") + name + "'");
  return obj.at(name);
}

std::map<std::string, std::size_t> index_ids(const json& items) {
  if (!items.is_array() || items.empty()) throw FormatError("expected a non-empty array of nodes");
  std::map<std::string, std::size_t> ids;
  for (const auto& it : items)
    if (!ids.emplace(id_key(field(it, "id")), ids.size()).second)
      throw FormatError("duplicate id " + id_key(it.at("id")));
  return ids;
}

std::size_t lookup(const std::map<std::string, std::size_t>& ids, const json& ref) {
  auto it = ids.find(id_key(ref));
  if (it == ids.end()) throw FormatError("reference to unknown id " + id_key(ref));
  return it->second;
}

Cobasis parse_cobasis(const std::string& s) {
  if (s == "n") return Cobasis::N;
  if (s == "o") return Cobasis::O;
  if (s == "mix") return Cobasis::Mix;
  throw FormatError("unknown cobasis '" + s + "'");
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string edge_label(bool binary, std::size_t i) {
  if (binary) return i == 0 ? "even" : "odd";
  return std::to_string(i);
}

}  // namespace

json graph_to_json(const ObsGraph& g) {
  json nodes = json::array();
  for (std::size_t v = 0; v < g.size(); ++v)
    nodes.push_back({{"id", v}, {"label", g.names[v]}, {"out", g.out[v]}, {"succ", g.succ[v]}, {"arity", g.arity(v)}});
  json j = {{"cobasis", cobasis_name(g.cobasis)}};
  if (g.cobasis != Cobasis::Mix) j["k"] = g.k;
  j["root"] = g.root;
  j["nodes"] = nodes;
  return j;
}

ObsGraph graph_from_json(const json& j) {
  ObsGraph g;
  g.cobasis = parse_cobasis(field(j, "cobasis").get<std::string>());
  const json& nodes = field(j, "nodes");
  auto ids = index_ids(nodes);
  for (const auto& n : nodes) {
    const json& succ = field(n, "succ");
    if (n.contains("arity") && n.at("arity").get<std::size_t>() != succ.size())
      throw FormatError("node " + id_key(n.at("id")) + ": arity differs from successor count");
    std::string label = n.contains("label") ? n.at("label").get<std::string>() : id_key(n.at("id"));
    std::size_t v = g.add_node(field(n, "out").get<std::string>(), label, succ.size());
    for (std::size_t i = 0; i < succ.size(); ++i) g.succ[v][i] = lookup(ids, succ[i]);
  }
  if (g.cobasis == Cobasis::Mix)
    g.k = 0;
  else
    g.k = j.contains("k") ? j.at("k").get<std::uint64_t>() : g.arity(0);
  g.root = lookup(ids, field(j, "root"));
  g.check();
  return g;
}

json automaton_to_json(const Automaton& a) {
  json states = json::array();
  for (std::size_t q = 0; q < a.size(); ++q) {
    json s = {{"id", a.names[q]}, {"out", a.out[q]}};
    if (a.mixed) s["beta"] = a.base(q);
    json edges = json::array();
    for (auto t : a.delta[q]) edges.push_back(a.names[t]);
    s["edges"] = edges;
    states.push_back(s);
  }
  json j = {{"kind", a.mixed ? "mixdfao" : "dfao"}};
  if (!a.mixed) j["k"] = a.k;
  j["initial"] = a.names[a.initial];
  j["states"] = states;
  return j;
}

Automaton automaton_from_json(const json& j) {
  Automaton a;
  std::string kind = field(j, "kind").get<std::string>();
  if (kind != "dfao" && kind != "mixdfao") throw FormatError("unknown automaton kind '" + kind + "'");
  a.mixed = kind == "mixdfao";
  const json& states = field(j, "states");
  auto ids = index_ids(states);
  for (const auto& s : states) {
    const json& edges = field(s, "edges");
    if (s.contains("beta") && s.at("beta").get<std::size_t>() != edges.size())
      throw FormatError("state " + id_key(s.at("id")) + ": beta differs from edge count");
    std::size_t q = a.add_state(field(s, "out").get<std::string>(), id_key(s.at("id")), edges.size());
    for (std::size_t d = 0; d < edges.size(); ++d) a.delta[q][d] = lookup(ids, edges[d]);
  }
  a.k = a.mixed ? 0 : (j.contains("k") ? j.at("k").get<std::uint64_t>() : a.base(0));
  a.initial = lookup(ids, field(j, "initial"));
  a.check();
  return a;
}

std::string graph_to_dot(const ObsGraph& g) {
  std::ostringstream os;
  const bool binary = g.cobasis == Cobasis::N && g.k == 2;
  os << "digraph observation {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (std::size_t v = 0; v < g.size(); ++v)
    os << "  n" << v << " [label=\"" << dot_escape(g.names[v]) << "\\nout=" << dot_escape(g.out[v]) << "\"];\n";
  os << "  __start -> n" << g.root << ";\n";
  for (std::size_t v = 0; v < g.size(); ++v)
    for (std::size_t i = 0; i < g.arity(v); ++i) {
      std::size_t label_index = g.cobasis == Cobasis::O ? i + 1 : i;
      os << "  n" << v << " -> n" << g.succ[v][i] << " [label=\"" << edge_label(binary, label_index) << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

std::string automaton_to_dot(const Automaton& a) {
  std::ostringstream os;
  os << "digraph automaton {\n  rankdir=LR;\n  __start [shape=point];\n";
  for (std::size_t q = 0; q < a.size(); ++q)
    os << "  q" << q << " [shape=circle,label=\"" << dot_escape(a.names[q]) << "/" << dot_escape(a.out[q]) << "\"];\n";
  os << "  __start -> q" << a.initial << ";\n";
  for (std::size_t q = 0; q < a.size(); ++q)
    for (std::size_t d = 0; d < a.base(q); ++d)
      os << "  q" << q << " -> q" << a.delta[q][d] << " [label=\"" << d << "\"];\n";
  os << "}\n";
  return os.str();
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace zs
