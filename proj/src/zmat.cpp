#include "zrc/zmat.hpp"

#include <algorithm>
#include <cmath>

namespace zrc {

SpMat::SpMat(int rows, int cols) : rows_(rows), cols_(cols), col_(cols) {
    if (rows < 0 || cols < 0) throw Error("SpMat: negative dimension");
}

SpMat SpMat::identity(int n) {
    SpMat m(n, n);
    for (int i = 0; i < n; ++i) m.col_[i].emplace_back(i, 1);
    return m;
}

void SpMat::check_index(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw Error("SpMat: index out of range");
}

void SpMat::add_entry(int r, int c, const Int& v) {
    if (sgn(v) == 0) return;
    check_index(r, c);
    auto& col = col_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const std::pair<int, Int>& p, int row) { return p.first < row; });
    if (it != col.end() && it->first == r) {
        it->second += v;
        if (sgn(it->second) == 0) col.erase(it);
    } else {
        col.insert(it, {r, v});
    }
}

void SpMat::set_entry(int r, int c, const Int& v) {
    check_index(r, c);
    auto& col = col_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const std::pair<int, Int>& p, int row) { return p.first < row; });
    if (it != col.end() && it->first == r) {
        if (sgn(v) == 0)
            col.erase(it);
        else
            it->second = v;
    } else if (sgn(v) != 0) {
        col.insert(it, {r, v});
    }
}

Int SpMat::at(int r, int c) const {
    check_index(r, c);
    const auto& col = col_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const std::pair<int, Int>& p, int row) { return p.first < row; });
    if (it != col.end() && it->first == r) return it->second;
    return Int(0);
}

SpMat SpMat::operator*(const SpMat& rhs) const {
    if (cols_ != rhs.rows_) throw Error("SpMat: dimension mismatch in product");
    SpMat out(rows_, rhs.cols_);
    std::vector<Int> acc(rows_);
    std::vector<int> touched;
    for (int j = 0; j < rhs.cols_; ++j) {
        touched.clear();
        for (const auto& [k, b] : rhs.col_[j]) {
            for (const auto& [i, a] : col_[k]) {
                if (sgn(acc[i]) == 0) touched.push_back(i);
                acc[i] += a * b;
            }
        }
        std::sort(touched.begin(), touched.end());
        auto& out_col = out.col_[j];
        for (int i : touched) {
            if (sgn(acc[i]) != 0) out_col.emplace_back(i, acc[i]);
            acc[i] = 0;
        }
    }
    return out;
}

SpMat SpMat::operator+(const SpMat& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error("SpMat: dimension mismatch in sum");
    SpMat out(rows_, cols_);
    for (int j = 0; j < cols_; ++j) {
        const auto& a = col_[j];
        const auto& b = rhs.col_[j];
        auto& o = out.col_[j];
        size_t ia = 0, ib = 0;
        while (ia < a.size() || ib < b.size()) {
            if (ib == b.size() || (ia < a.size() && a[ia].first < b[ib].first)) {
                o.push_back(a[ia++]);
            } else if (ia == a.size() || b[ib].first < a[ia].first) {
                o.push_back(b[ib++]);
            } else {
                Int v = a[ia].second + b[ib].second;
                if (sgn(v) != 0) o.emplace_back(a[ia].first, v);
                ++ia, ++ib;
            }
        }
    }
    return out;
}

SpMat SpMat::operator-() const {
    SpMat out(*this);
    for (auto& col : out.col_)
        for (auto& [r, v] : col) v = -v;
    return out;
}

SpMat SpMat::operator-(const SpMat& rhs) const { return *this + (-rhs); }

bool SpMat::operator==(const SpMat& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && col_ == rhs.col_;
}

SpMat SpMat::scaled(const Int& k) const {
    if (sgn(k) == 0) return SpMat(rows_, cols_);
    SpMat out(*this);
    for (auto& col : out.col_)
        for (auto& [r, v] : col) v *= k;
    return out;
}

SpMat SpMat::transpose() const {
    SpMat out(cols_, rows_);
    for (int j = 0; j < cols_; ++j)
        for (const auto& [i, v] : col_[j]) out.col_[i].emplace_back(j, v);
    for (auto& col : out.col_)
        std::sort(col.begin(), col.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

bool SpMat::is_zero() const {
    for (const auto& col : col_)
        if (!col.empty()) return false;
    return true;
}

long SpMat::nnz() const {
    long n = 0;
    for (const auto& col : col_) n += static_cast<long>(col.size());
    return n;
}

Int SpMat::l1_norm() const {
    Int best(0);
    Int sum;
    for (const auto& col : col_) {
        sum = 0;
        for (const auto& [r, v] : col) sum += abs(v);
        if (sum > best) best = sum;
    }
    return best;
}

std::vector<Int> SpMat::apply(const std::vector<Int>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw Error("SpMat::apply: size mismatch");
    std::vector<Int> y(rows_);
    for (int j = 0; j < cols_; ++j) {
        if (sgn(x[j]) == 0) continue;
        for (const auto& [i, v] : col_[j]) y[i] += v * x[j];
    }
    return y;
}

SpMat SpMat::block_diag(const SpMat& a, const SpMat& b) {
    SpMat out(a.rows_ + b.rows_, a.cols_ + b.cols_);
    for (int j = 0; j < a.cols_; ++j) out.col_[j] = a.col_[j];
    for (int j = 0; j < b.cols_; ++j) {
        auto& col = out.col_[a.cols_ + j];
        col.reserve(b.col_[j].size());
        for (const auto& [r, v] : b.col_[j]) col.emplace_back(r + a.rows_, v);
    }
    return out;
}

SpMat SpMat::hstack(const SpMat& a, const SpMat& b) {
    if (a.rows_ != b.rows_) throw Error("SpMat::hstack: row mismatch");
    SpMat out(a.rows_, a.cols_ + b.cols_);
    for (int j = 0; j < a.cols_; ++j) out.col_[j] = a.col_[j];
    for (int j = 0; j < b.cols_; ++j) out.col_[a.cols_ + j] = b.col_[j];
    return out;
}

SpMat SpMat::vstack(const SpMat& a, const SpMat& b) {
    if (a.cols_ != b.cols_) throw Error("SpMat::vstack: column mismatch");
    SpMat out(a.rows_ + b.rows_, a.cols_);
    for (int j = 0; j < a.cols_; ++j) {
        auto& col = out.col_[j];
        col = a.col_[j];
        for (const auto& [r, v] : b.col_[j]) col.emplace_back(r + a.rows_, v);
    }
    return out;
}

SpMat SpMat::block2x2(const SpMat& a, const SpMat& b, const SpMat& c, const SpMat& d) {
    return vstack(hstack(a, b), hstack(c, d));
}

SpMat SpMat::select(const std::vector<int>& rows, const std::vector<int>& cols) const {
    return select_rows(rows).select_cols(cols);
}

SpMat SpMat::select_rows(const std::vector<int>& rows) const {
    std::vector<int> pos(rows_, -1);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 0 || rows[i] >= rows_) throw Error("SpMat::select_rows: bad row");
        pos[rows[i]] = static_cast<int>(i);
    }
    SpMat out(static_cast<int>(rows.size()), cols_);
    for (int j = 0; j < cols_; ++j) {
        auto& col = out.col_[j];
        for (const auto& [r, v] : col_[j])
            if (pos[r] >= 0) col.emplace_back(pos[r], v);
        std::sort(col.begin(), col.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
    }
    return out;
}

SpMat SpMat::select_cols(const std::vector<int>& cols) const {
    SpMat out(rows_, static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] < 0 || cols[j] >= cols_) throw Error("SpMat::select_cols: bad column");
        out.col_[j] = col_[cols[j]];
    }
    return out;
}

SpMat SpMat::permutation(const std::vector<int>& perm) {
    int n = static_cast<int>(perm.size());
    SpMat out(n, n);
    for (int i = 0; i < n; ++i) {
        if (perm[i] < 0 || perm[i] >= n) throw Error("SpMat::permutation: bad index");
        out.col_[i].emplace_back(perm[i], 1);
    }
    return out;
}

ZDense ZDense::identity(int n) {
    ZDense d(n, n);
    for (int i = 0; i < n; ++i) d.at(i, i) = 1;
    return d;
}

void ZDense::swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < cols; ++c) std::swap(at(i, c), at(j, c));
}

void ZDense::swap_cols(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < rows; ++r) std::swap(at(r, i), at(r, j));
}

void ZDense::add_row(int i, int j, const Int& k) {
    if (sgn(k) == 0) return;
    Int* ri = &a[static_cast<size_t>(i) * cols];
    const Int* rj = &a[static_cast<size_t>(j) * cols];
    for (int c = 0; c < cols; ++c)
        if (sgn(rj[c]) != 0) ri[c] += k * rj[c];
}

void ZDense::add_col(int i, int j, const Int& k) {
    if (sgn(k) == 0) return;
    for (int r = 0; r < rows; ++r) {
        const Int& v = at(r, j);
        if (sgn(v) != 0) at(r, i) += k * v;
    }
}

void ZDense::negate_row(int i) {
    for (int c = 0; c < cols; ++c) at(i, c) = -at(i, c);
}

void ZDense::negate_col(int i) {
    for (int r = 0; r < rows; ++r) at(r, i) = -at(r, i);
}

SpMat to_sparse(const ZDense& d) {
    SpMat out(d.rows, d.cols);
    for (int c = 0; c < d.cols; ++c)
        for (int r = 0; r < d.rows; ++r)
            if (sgn(d.at(r, c)) != 0) out.add_entry(r, c, d.at(r, c));
    return out;
}

ZDense to_dense(const SpMat& s) {
    ZDense out(s.rows(), s.cols());
    for (int c = 0; c < s.cols(); ++c)
        for (const auto& [r, v] : s.column(c)) out.at(r, c) = v;
    return out;
}

double log_mpz(const Int& z) {
    if (sgn(z) <= 0) throw Error("log_mpz: nonpositive argument");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * M_LN2;
}

double log_plus_mpz(const Int& z) {
    if (z <= 1) return 0.0;
    return std::max(log_mpz(z), 0.0);
}

double log_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

std::string rat_to_string(const Rat& q) { return q.get_str(); }

Rat rat_from_string(const std::string& s) {
    Rat q;
    if (q.set_str(s, 10) != 0) throw Error("bad rational literal: " + s);
    q.canonicalize();
    return q;
}

}  // namespace zrc
