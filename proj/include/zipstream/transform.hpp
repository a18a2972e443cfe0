#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zipstream/core.hpp"
#include "zipstream/semantics.hpp"

namespace zs {

// Adds X' = X as new root when the root occurs on some right-hand side.
ZipSpec ensure_free_root(const ZipSpec& s);

// Spec for the periodic stream uuu... in paired N_k form, variables named base<i> and base<i>'.
ZipSpec periodic_to_zipk(const std::vector<Symbol>& u, std::uint64_t k, const std::string& base = "X");

// Every equation is c1 : ... : cm : zip_k(X1, ..., Xk) with k >= 2.
bool is_flat(const ZipSpec& s);
// Longest cons prefix over all equations.
std::size_t max_prefix(const ZipSpec& s);

// zip(t) -> t everywhere.
ZipSpec eliminate_unary_zips(const ZipSpec& s);

// Equivalent flat spec; zip arities other than 1 are preserved.
ZipSpec flatten(const ZipSpec& s);

// Drops equations not reachable from the root.
ZipSpec prune_unreachable(const ZipSpec& s);

}  // namespace zs
