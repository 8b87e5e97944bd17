#include "zrc/snf.hpp"

#include <algorithm>

namespace zrc {

std::vector<Int> SmithDecomposition::invariant_factors() const {
    std::vector<Int> out;
    int n = std::min(S.rows, S.cols);
    for (int i = 0; i < n; ++i)
        if (sgn(S.at(i, i)) != 0) out.push_back(S.at(i, i));
    return out;
}

std::vector<Int> SmithDecomposition::torsion_factors() const {
    std::vector<Int> out;
    for (const Int& f : invariant_factors())
        if (f > 1) out.push_back(f);
    return out;
}

namespace {

// Smallest-absolute-value nonzero pivot in the lower-right submatrix,
// row-major tie-break.  Returns false when the submatrix is zero.
bool find_pivot(const ZDense& d, int t, int& pr, int& pc) {
    bool found = false;
    Int best;
    for (int i = t; i < d.rows; ++i) {
        for (int j = t; j < d.cols; ++j) {
            const Int& v = d.at(i, j);
            if (sgn(v) == 0) continue;
            Int av = abs(v);
            if (!found || av < best) {
                found = true;
                best = av;
                pr = i;
                pc = j;
            }
        }
    }
    return found;
}

bool pivot_is_lone(const ZDense& d, int t) {
    for (int i = t + 1; i < d.rows; ++i)
        if (sgn(d.at(i, t)) != 0) return false;
    for (int j = t + 1; j < d.cols; ++j)
        if (sgn(d.at(t, j)) != 0) return false;
    return true;
}

}  // namespace

SmithDecomposition smith_normal_form(const ZDense& a) {
    SmithDecomposition out;
    out.S = a;
    out.U = ZDense::identity(a.rows);
    out.V = ZDense::identity(a.cols);
    ZDense& D = out.S;
    ZDense& U = out.U;
    ZDense& V = out.V;

    const int nmin = std::min(a.rows, a.cols);
    Int q;
    for (int t = 0; t < nmin; ++t) {
        int pr, pc;
        if (!find_pivot(D, t, pr, pc)) break;
        for (;;) {
            D.swap_rows(t, pr);
            U.swap_rows(t, pr);
            D.swap_cols(t, pc);
            V.swap_cols(t, pc);

            for (int i = t + 1; i < D.rows; ++i) {
                if (sgn(D.at(i, t)) == 0) continue;
                q = D.at(i, t) / D.at(t, t);  // truncated division keeps |remainder| < |pivot|
                D.add_row(i, t, -q);
                U.add_row(i, t, -q);
            }
            for (int j = t + 1; j < D.cols; ++j) {
                if (sgn(D.at(t, j)) == 0) continue;
                q = D.at(t, j) / D.at(t, t);
                D.add_col(j, t, -q);
                V.add_col(j, t, -q);
            }

            if (!pivot_is_lone(D, t)) {
                if (!find_pivot(D, t, pr, pc)) break;
                continue;
            }

            // Divisibility pass: pull a bad entry into the pivot row.
            bool divides_all = true;
            for (int i = t + 1; i < D.rows && divides_all; ++i)
                for (int j = t + 1; j < D.cols; ++j)
                    if (!mpz_divisible_p(D.at(i, j).get_mpz_t(), D.at(t, t).get_mpz_t())) {
                        D.add_row(t, i, 1);
                        U.add_row(t, i, 1);
                        divides_all = false;
                        break;
                    }
            if (divides_all) break;
            if (!find_pivot(D, t, pr, pc)) break;
        }
        if (sgn(D.at(t, t)) < 0) {
            D.negate_row(t);
            U.negate_row(t);
        }
        if (sgn(D.at(t, t)) != 0) out.rank = t + 1;
    }
    return out;
}

SmithDecomposition smith_normal_form(const SpMat& a) { return smith_normal_form(to_dense(a)); }

bool smith_check(const SpMat& a, const SmithDecomposition& d) {
    SpMat u = to_sparse(d.U), v = to_sparse(d.V), s = to_sparse(d.S);
    if (u * a * v != s) return false;
    for (int i = 0; i < std::min(d.S.rows, d.S.cols); ++i) {
        for (int j = 0; j < d.S.cols; ++j)
            if (i != j && sgn(d.S.at(i, j)) != 0) return false;
        if (sgn(d.S.at(i, i)) < 0) return false;
        if (i + 1 < std::min(d.S.rows, d.S.cols) && sgn(d.S.at(i, i)) != 0 &&
            sgn(d.S.at(i + 1, i + 1)) != 0 &&
            !mpz_divisible_p(d.S.at(i + 1, i + 1).get_mpz_t(), d.S.at(i, i).get_mpz_t()))
            return false;
    }
    Int du = determinant(d.U), dv = determinant(d.V);
    return abs(du) == 1 && abs(dv) == 1;
}

int rank_q(const SpMat& a) {
    // Bareiss fraction-free elimination.
    ZDense d = to_dense(a);
    int m = d.rows, n = d.cols;
    Int prev(1);
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int piv = -1;
        for (int i = rank; i < m; ++i)
            if (sgn(d.at(i, col)) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        d.swap_rows(rank, piv);
        for (int i = rank + 1; i < m; ++i) {
            for (int j = col + 1; j < n; ++j) {
                Int v = d.at(rank, col) * d.at(i, j) - d.at(i, col) * d.at(rank, j);
                mpz_divexact(d.at(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
            d.at(i, col) = 0;
        }
        prev = d.at(rank, col);
        ++rank;
    }
    return rank;
}

int rank_mod_p(const SpMat& a, long p) {
    if (p < 2) throw Error("rank_mod_p: modulus must be >= 2");
    int m = a.rows(), n = a.cols();
    std::vector<std::vector<long>> d(m, std::vector<long>(n, 0));
    for (int j = 0; j < n; ++j)
        for (const auto& [i, v] : a.column(j)) {
            long r = static_cast<long>(mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p)));
            d[i][j] = r;
        }
    auto mulmod = [p](long x, long y) {
        return static_cast<long>((static_cast<unsigned __int128>(x) * static_cast<unsigned long>(y)) %
                                 static_cast<unsigned long>(p));
    };
    auto invmod = [p](long x) {
        long t = 0, newt = 1, r = p, newr = x % p;
        while (newr != 0) {
            long q = r / newr;
            t -= q * newt;
            std::swap(t, newt);
            r -= q * newr;
            std::swap(r, newr);
        }
        return ((t % p) + p) % p;
    };
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int piv = -1;
        for (int i = rank; i < m; ++i)
            if (d[i][col] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(d[rank], d[piv]);
        long inv = invmod(d[rank][col]);
        for (int i = rank + 1; i < m; ++i) {
            if (d[i][col] == 0) continue;
            long f = mulmod(d[i][col], inv);
            for (int j = col; j < n; ++j) {
                long v = d[i][j] - mulmod(f, d[rank][j]);
                d[i][j] = ((v % p) + p) % p;
            }
        }
        ++rank;
    }
    return rank;
}

Int determinant(const ZDense& a) {
    if (a.rows != a.cols) throw Error("determinant: not square");
    ZDense d = a;
    int n = d.rows;
    Int prev(1);
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (sgn(d.at(i, k)) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) return Int(0);
        if (piv != k) {
            d.swap_rows(k, piv);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Int v = d.at(k, k) * d.at(i, j) - d.at(i, k) * d.at(k, j);
                mpz_divexact(d.at(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
            d.at(i, k) = 0;
        }
        prev = d.at(k, k);
    }
    return sign > 0 ? d.at(n - 1, n - 1) : Int(-d.at(n - 1, n - 1));
}

std::optional<std::vector<Int>> preimage_solve(const SmithDecomposition& d,
                                               const std::vector<Int>& b) {
    int m = d.S.rows, n = d.S.cols;
    if (static_cast<int>(b.size()) != m) throw Error("preimage_solve: size mismatch");
    // c = U b
    std::vector<Int> c(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (sgn(d.U.at(i, j)) != 0) c[i] += d.U.at(i, j) * b[j];
    std::vector<Int> y(n);
    for (int i = 0; i < std::min(m, n); ++i) {
        if (sgn(d.S.at(i, i)) == 0) {
            if (sgn(c[i]) != 0) return std::nullopt;
        } else {
            if (!mpz_divisible_p(c[i].get_mpz_t(), d.S.at(i, i).get_mpz_t())) return std::nullopt;
            mpz_divexact(y[i].get_mpz_t(), c[i].get_mpz_t(), d.S.at(i, i).get_mpz_t());
        }
    }
    for (int i = std::min(m, n); i < m; ++i)
        if (sgn(c[i]) != 0) return std::nullopt;
    // x = V y
    std::vector<Int> x(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (sgn(d.V.at(i, j)) != 0 && sgn(y[j]) != 0) x[i] += d.V.at(i, j) * y[j];
    return x;
}

std::optional<std::vector<Int>> preimage_solve(const SpMat& a, const std::vector<Int>& b) {
    return preimage_solve(smith_normal_form(a), b);
}

ZDense hermite_columns(const ZDense& a) {
    ZDense h = a;
    int m = h.rows, n = h.cols;
    int col = 0;
    for (int row = 0; row < m && col < n; ++row) {
        // gcd out the entries of this row across columns >= col
        for (;;) {
            int piv = -1;
            Int best;
            for (int j = col; j < n; ++j) {
                if (sgn(h.at(row, j)) == 0) continue;
                Int av = abs(h.at(row, j));
                if (piv < 0 || av < best) {
                    piv = j;
                    best = av;
                }
            }
            if (piv < 0) break;
            h.swap_cols(col, piv);
            bool clean = true;
            for (int j = col + 1; j < n; ++j) {
                if (sgn(h.at(row, j)) == 0) continue;
                Int q = h.at(row, j) / h.at(row, col);
                h.add_col(j, col, -q);
                if (sgn(h.at(row, j)) != 0) clean = false;
            }
            if (clean) break;
        }
        if (sgn(h.at(row, col)) == 0) continue;
        if (sgn(h.at(row, col)) < 0) h.negate_col(col);
        // reduce earlier columns into [0, pivot)
        for (int j = 0; j < col; ++j) {
            if (sgn(h.at(row, j)) == 0) continue;
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h.at(row, j).get_mpz_t(), h.at(row, col).get_mpz_t());
            h.add_col(j, col, -q);
        }
        ++col;
    }
    return h;
}

SpMat kernel_basis(const SpMat& a) {
    SmithDecomposition d = smith_normal_form(a);
    int n = a.cols();
    int k = n - d.rank;
    ZDense ker(n, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) ker.at(i, j) = d.V.at(i, d.rank + j);
    return to_sparse(hermite_columns(ker));
}

}  // namespace zrc
