#include "zipstream/parallel.hpp"

namespace zs {

std::vector<Symbol> interpret_range(const ObsGraph& g, std::uint64_t begin, std::uint64_t count) {
  std::vector<Symbol> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) out[j] = interpret(g, begin + j);
  return out;
}

std::vector<Symbol> interpret_range_serial(const ObsGraph& g, std::uint64_t begin, std::uint64_t count) {
  std::vector<Symbol> out;
  out.reserve(count);
  for (std::uint64_t j = 0; j < count; ++j) out.push_back(interpret(g, begin + j));
  return out;
}

std::vector<Symbol> generate_range(const Automaton& a, std::uint64_t begin, std::uint64_t count) {
  std::vector<Symbol> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < n; ++j) out[j] = generate(a, begin + j);
  return out;
}

std::vector<Symbol> generate_range_serial(const Automaton& a, std::uint64_t begin, std::uint64_t count) {
  std::vector<Symbol> out;
  out.reserve(count);
  for (std::uint64_t j = 0; j < count; ++j) out.push_back(generate(a, begin + j));
  return out;
}

std::vector<RunResult> fractran_outputs(const FractranProgram& f, std::uint64_t begin, std::uint64_t count,
                                        std::uint64_t max_steps) {
  std::vector<RunResult> out(count);
  const auto n = static_cast<std::int64_t>(count);
  // Run lengths vary a lot between inputs.
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t j = 0; j < n; ++j) out[j] = run_output(f, BigNat(begin + j), max_steps);
  return out;
}

std::vector<RunResult> fractran_outputs_serial(const FractranProgram& f, std::uint64_t begin, std::uint64_t count,
                                               std::uint64_t max_steps) {
  std::vector<RunResult> out;
  out.reserve(count);
  for (std::uint64_t j = 0; j < count; ++j) out.push_back(run_output(f, BigNat(begin + j), max_steps));
  return out;
}

std::vector<std::vector<bool>> bisimilarity_matrix(const std::vector<ObsGraph>& gs) {
  const auto n = static_cast<std::int64_t>(gs.size());
  std::vector<std::vector<char>> cells(gs.size(), std::vector<char>(gs.size(), 0));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t p = 0; p < n * n; ++p) {
    const auto i = p / n, j = p % n;
    cells[i][j] = bisimilar(gs[i], gs[j]).bisimilar;
  }
  std::vector<std::vector<bool>> m(gs.size(), std::vector<bool>(gs.size()));
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = 0; j < gs.size(); ++j) m[i][j] = cells[i][j];
  return m;
}

std::vector<std::vector<bool>> bisimilarity_matrix_serial(const std::vector<ObsGraph>& gs) {
  std::vector<std::vector<bool>> m(gs.size(), std::vector<bool>(gs.size()));
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = 0; j < gs.size(); ++j) m[i][j] = bisimilar(gs[i], gs[j]).bisimilar;
  return m;
}

}  // namespace zs
