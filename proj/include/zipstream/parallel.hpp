#pragma once

#include <cstdint>
#include <vector>

#include "zipstream/automata.hpp"
#include "zipstream/fractran.hpp"
#include "zipstream/graphs.hpp"

namespace zs {

// Batch kernels. Each *_serial function is the reference the parallel one is tested against.

std::vector<Symbol> interpret_range(const ObsGraph& g, std::uint64_t begin, std::uint64_t count);
std::vector<Symbol> interpret_range_serial(const ObsGraph& g, std::uint64_t begin, std::uint64_t count);

std::vector<Symbol> generate_range(const Automaton& a, std::uint64_t begin, std::uint64_t count);
std::vector<Symbol> generate_range_serial(const Automaton& a, std::uint64_t begin, std::uint64_t count);

// run_output for every n in [begin, begin + count).
std::vector<RunResult> fractran_outputs(const FractranProgram& f, std::uint64_t begin, std::uint64_t count,
                                        std::uint64_t max_steps);
std::vector<RunResult> fractran_outputs_serial(const FractranProgram& f, std::uint64_t begin, std::uint64_t count,
                                               std::uint64_t max_steps);

// m[i][j] = bisimilar(gs[i], gs[j]).bisimilar
std::vector<std::vector<bool>> bisimilarity_matrix(const std::vector<ObsGraph>& gs);
std::vector<std::vector<bool>> bisimilarity_matrix_serial(const std::vector<ObsGraph>& gs);

}  // namespace zs
