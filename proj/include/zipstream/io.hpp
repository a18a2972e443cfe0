#pragma once

#include <string>

#include <json.hpp>

#include "zipstream/automata.hpp"
#include "zipstream/graphs.hpp"

namespace zs {

// {cobasis, k, root, nodes:[{id, label, out, succ, arity}]}. Ids may be numbers or strings.
nlohmann::ordered_json graph_to_json(const ObsGraph& g);
ObsGraph graph_from_json(const nlohmann::ordered_json& j);

// {kind:"dfao"|"mixdfao", k?, states:[{id, out, beta?, edges}], initial}
nlohmann::ordered_json automaton_to_json(const Automaton& a);
Automaton automaton_from_json(const nlohmann::ordered_json& j);

std::string graph_to_dot(const ObsGraph& g);
std::string automaton_to_dot(const Automaton& a);

nlohmann::ordered_json load_json(const std::string& path);

}  // namespace zs
