#ifndef ZRC_ZMAT_HPP
#define ZRC_ZMAT_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zrc {

using Int = mpz_class;
using Rat = mpq_class;

/// Error thrown when a construction or verification fails.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Sparse integer matrix, column-major.  Each column holds (row, value)
/// pairs sorted by row with nonzero values.
class SpMat {
public:
    SpMat() = default;
    SpMat(int rows, int cols);

    static SpMat identity(int n);
    static SpMat zero(int rows, int cols) { return SpMat(rows, cols); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    // Accumulating entry setter; removes the entry when the result is 0.
    void add_entry(int r, int c, const Int& v);
    void set_entry(int r, int c, const Int& v);
    Int at(int r, int c) const;

    const std::vector<std::pair<int, Int>>& column(int c) const { return col_[c]; }

    SpMat operator*(const SpMat& rhs) const;
    SpMat operator+(const SpMat& rhs) const;
    SpMat operator-(const SpMat& rhs) const;
    SpMat operator-() const;
    bool operator==(const SpMat& rhs) const;
    bool operator!=(const SpMat& rhs) const { return !(*this == rhs); }

    SpMat scaled(const Int& k) const;
    SpMat transpose() const;

    bool is_zero() const;
    long nnz() const;

    // Max over columns of the column's absolute entry sum; 0 for empty.
    Int l1_norm() const;

    std::vector<Int> apply(const std::vector<Int>& x) const;

    // Block sum: this in the upper-left, rhs in the lower-right.
    static SpMat block_diag(const SpMat& a, const SpMat& b);
    static SpMat hstack(const SpMat& a, const SpMat& b);
    static SpMat vstack(const SpMat& a, const SpMat& b);
    // [ a b ; c d ]
    static SpMat block2x2(const SpMat& a, const SpMat& b, const SpMat& c, const SpMat& d);

    // Keeps the selected rows/columns, in the given order.
    SpMat select(const std::vector<int>& rows, const std::vector<int>& cols) const;
    SpMat select_rows(const std::vector<int>& rows) const;
    SpMat select_cols(const std::vector<int>& cols) const;

    // Permutation matrix P with P[perm[i]][i] = 1 (maps e_i to e_{perm[i]}).
    static SpMat permutation(const std::vector<int>& perm);

private:
    int rows_ = 0, cols_ = 0;
    std::vector<std::vector<std::pair<int, Int>>> col_;

    void check_index(int r, int c) const;
};

/// Dense integer matrix used by the elimination algorithms.
struct ZDense {
    int rows = 0, cols = 0;
    std::vector<Int> a;

    ZDense() = default;
    ZDense(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Int& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Int& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static ZDense identity(int n);

    void swap_rows(int i, int j);
    void swap_cols(int i, int j);
    // row_i += k * row_j
    void add_row(int i, int j, const Int& k);
    void add_col(int i, int j, const Int& k);
    void negate_row(int i);
    void negate_col(int i);
};

SpMat to_sparse(const ZDense& d);
ZDense to_dense(const SpMat& s);

// Natural log of a positive big integer, relative error well below 1e-12.
double log_mpz(const Int& z);
// max{log z, 0} with the convention log_+ 0 = 0.
double log_plus_mpz(const Int& z);
double log_plus(double x);

std::string rat_to_string(const Rat& q);
Rat rat_from_string(const std::string& s);

}  // namespace zrc

#endif
