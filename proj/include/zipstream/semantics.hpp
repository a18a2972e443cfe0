#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zipstream/core.hpp"

namespace zs {

struct RewriteBudget {
  std::uint64_t max_steps = 1'000'000;
};

using Prefix = std::vector<Symbol>;

// Lazy head expansion under the zip, projection and unfolding rules.
// Results are memoized per interned term, so one evaluator should be reused for a whole prefix.
class Evaluator {
 public:
  explicit Evaluator(ZipSpec s, RewriteBudget b = {});
  // t ->* a : t'
  std::pair<Symbol, Term> expand_head(Term t);
  Prefix prefix(Term t, std::size_t n);
  std::uint64_t steps() const { return steps_; }
  const ZipSpec& spec() const { return spec_; }

 private:
  void tick();
  ZipSpec spec_;
  RewriteBudget budget_;
  std::uint64_t steps_ = 0;
  std::unordered_map<Term, std::pair<Symbol, Term>> memo_;
};

std::pair<Symbol, Term> expand_head(Term t, const ZipSpec& s, RewriteBudget b = {});
Prefix eval_prefix(const ZipSpec& s, std::size_t n, RewriteBudget b = {});
Prefix project_prefix(const ZipSpec& s, std::uint64_t i, std::uint64_t k, std::size_t n, RewriteBudget b = {});

// proj_{i,n}(zip_k(args)) rewritten as a zip of projections of the arguments.
Term project_through_zip(std::uint64_t i, std::uint64_t n, std::uint64_t k, const std::vector<Term>& args);

// Random access to a stream position by index arithmetic: no residual terms are built.
// Suited to specifications with very wide zips, such as the Fractran encodings.
class StreamIndexer {
 public:
  explicit StreamIndexer(ZipSpec s, RewriteBudget b = {});
  Symbol at(Term t, std::uint64_t n);
  Symbol at(std::uint64_t n);  // position n of the root
  Prefix prefix(std::size_t n);
  std::uint64_t steps() const { return steps_; }

 private:
  ZipSpec spec_;
  RewriteBudget budget_;
  std::uint64_t steps_ = 0;
  // var -> period length when rhs(var) = c1:...:cp:var
  std::unordered_map<std::string, std::uint64_t> period_;
  std::unordered_map<std::string, Term> rhs_;
};

// Zip-guarded, projection-free, every zip arity at least 2: the class on which
// the observation-graph rewrite system terminates.
bool is_graph_ready(const ZipSpec& s, std::string* why = nullptr);

// Normal forms for the observation rewrite system. Variables act as constants that
// unfold only under hd and proj.
class Normalizer {
 public:
  explicit Normalizer(ZipSpec s, RewriteBudget b = {});
  // Normal form of proj_{i,k}(t) for t already in normal form.
  Term proj(std::uint64_t i, std::uint64_t k, Term t);
  // Normal form of hd(t).
  Symbol head(Term t);
  // Normal form of an arbitrary term whose Proj nodes are read as the proj symbols.
  Term normalize(Term t);
  // Arity of the first zip in the tree unfolding of t.
  std::uint64_t arity(Term t);
  std::uint64_t steps() const { return steps_; }
  const ZipSpec& spec() const { return spec_; }

 private:
  void tick();
  ZipSpec spec_;
  RewriteBudget budget_;
  std::uint64_t steps_ = 0;
};

Term normalize(Term t, const ZipSpec& s, RewriteBudget b = {});
Symbol normalize_head(Term t, const ZipSpec& s, RewriteBudget b = {});

}  // namespace zs
