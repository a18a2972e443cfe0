#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "zipstream/core.hpp"
#include "zipstream/graphs.hpp"

namespace zs {

using BigNat = boost::multiprecision::cpp_int;

struct Fraction {
  BigNat p, q;
  std::optional<Symbol> out;
};

struct FractranProgram {
  std::vector<Fraction> fractions;
  // p < q for every fraction without output.
  bool decreasing() const;
};

FractranProgram parse_fractran(const std::string& text);
FractranProgram load_fractran(const std::string& path);
std::string print_fractran(const FractranProgram& f);

// Symbol used for termination without output.
inline const Symbol kBottom = "bot";

struct FractranState {
  enum class Kind { Value, Output, Halted } kind = Kind::Value;
  BigNat value;
  Symbol out;  // Output: the annotation; Halted: kBottom
};

FractranState step(const FractranProgram& f, const BigNat& n);

struct RunResult {
  enum class Kind { Output, Timeout, Cancelled } kind = Kind::Output;
  Symbol out;  // an annotation or kBottom
  std::uint64_t steps = 0;
};

RunResult run_output(const FractranProgram& f, const BigNat& n, std::uint64_t max_steps,
                     const std::atomic<bool>* cancel = nullptr);

struct Gadget {
  FractranProgram f0, f1;
  BigNat c, z1, z2;
  std::vector<BigNat> primes;  // prime factors of all p_i, q_i, ascending
};

inline const Symbol kChiA = "chi_a";
inline const Symbol kChiB = "chi_b";

// Requires a program without outputs. F1 is F0 without the two initialization fractions.
Gadget build_gadget(const FractranProgram& f);

// X0 = zip_d(X1, ..., Xd); Xn = proj(b_n - 1, d p/q, X0) | out : Xn | bot : Xn.
ZipSpec to_zip_pi_spec(const FractranProgram& f, std::uint64_t max_d = 1u << 20);

struct ProbeResult {
  bool agree = true;
  std::optional<std::uint64_t> index;
  Symbol left, right;
  std::uint64_t compared = 0;
};

// Compares the zip-pi encodings of the two gadget programs on N positions.
ProbeResult gadget_equiv_probe(const FractranProgram& f, std::uint64_t n, RewriteBudget b = {});

BigNat next_prime_above(const BigNat& n);

}  // namespace zs
