#ifndef ZRC_SNF_HPP
#define ZRC_SNF_HPP

#include <optional>
#include <vector>

#include "zrc/zmat.hpp"

namespace zrc {

/// U * A * V = S with S diagonal, nonnegative, d_1 | d_2 | ..., and U, V
/// unimodular.
struct SmithDecomposition {
    ZDense S, U, V;
    int rank = 0;

    std::vector<Int> invariant_factors() const;  // the nonzero diagonal entries
    std::vector<Int> torsion_factors() const;    // factors > 1
};

SmithDecomposition smith_normal_form(const SpMat& a);
SmithDecomposition smith_normal_form(const ZDense& a);

// Consistency check of the decomposition against the input (U*A*V == S,
// divisibility chain, |det U| = |det V| = 1).  Used by tests.
bool smith_check(const SpMat& a, const SmithDecomposition& d);

// Rank over Q via fraction-free elimination.
int rank_q(const SpMat& a);
// Rank over F_p; p must be an odd-ish prime < 2^31 (2 is fine too).
int rank_mod_p(const SpMat& a, long p);

Int determinant(const ZDense& a);

// Integer solution of A x = b, if one exists.
std::optional<std::vector<Int>> preimage_solve(const SpMat& a, const std::vector<Int>& b);

// Same, reusing a precomputed decomposition of A.
std::optional<std::vector<Int>> preimage_solve(const SmithDecomposition& d,
                                               const std::vector<Int>& b);

// Basis of the integer kernel of A, as columns, in Hermite-reduced form.
SpMat kernel_basis(const SpMat& a);

// Column-style Hermite normal form of a full-column-rank matrix.
ZDense hermite_columns(const ZDense& a);

}  // namespace zrc

#endif
