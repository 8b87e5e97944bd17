#include <doctest.h>

#include <random>

#include "zrc/snf.hpp"

using namespace zrc;

namespace {

// Independent oracle: the k-th invariant factor equals g_k / g_{k-1}, where
// g_k is the gcd of all k x k minors (g_0 = 1).
Int minor_det(const ZDense& a, const std::vector<int>& rows, const std::vector<int>& cols) {
    int k = static_cast<int>(rows.size());
    ZDense sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub.at(i, j) = a.at(rows[i], cols[j]);
    return determinant(sub);
}

void subsets(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(k);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i <= n - (k - depth); ++i) {
            cur[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    if (k >= 0 && k <= n) rec(0, 0);
}

std::vector<Int> factors_by_minors(const SpMat& m) {
    ZDense a = to_dense(m);
    std::vector<Int> out;
    Int prev(1);
    for (int k = 1; k <= std::min(a.rows, a.cols); ++k) {
        std::vector<std::vector<int>> rsets, csets;
        subsets(a.rows, k, rsets);
        subsets(a.cols, k, csets);
        Int g(0);
        for (const auto& r : rsets)
            for (const auto& c : csets) g = gcd(g, minor_det(a, r, c));
        if (sgn(g) == 0) break;
        out.push_back(g / prev);
        prev = g;
    }
    return out;
}

SpMat random_matrix(std::mt19937& rng, int max_dim, int max_entry) {
    std::uniform_int_distribution<int> dim(1, max_dim);
    std::uniform_int_distribution<int> val(-max_entry, max_entry);
    int r = dim(rng), c = dim(rng);
    SpMat m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.set_entry(i, j, Int(val(rng)));
    return m;
}

}  // namespace

TEST_CASE("smith normal form: pinned examples against the minors oracle") {
    // diag(2,3) -> (1,6): d1 = gcd of entries = 1, d1*d2 = |det| = 6
    SpMat a(2, 2);
    a.set_entry(0, 0, 2);
    a.set_entry(1, 1, 3);
    auto d = smith_normal_form(a);
    REQUIRE(smith_check(a, d));
    CHECK(d.invariant_factors() == std::vector<Int>{1, 6});
    CHECK(factors_by_minors(a) == std::vector<Int>{1, 6});

    // [[2,4],[6,8]] -> (2,4): d1 = gcd = 2, d1*d2 = |det| = 8
    SpMat b(2, 2);
    b.set_entry(0, 0, 2);
    b.set_entry(0, 1, 4);
    b.set_entry(1, 0, 6);
    b.set_entry(1, 1, 8);
    auto db = smith_normal_form(b);
    REQUIRE(smith_check(b, db));
    CHECK(db.invariant_factors() == std::vector<Int>{2, 4});
    CHECK(factors_by_minors(b) == std::vector<Int>{2, 4});

    SpMat z(3, 2);
    auto dz = smith_normal_form(z);
    CHECK(dz.rank == 0);
    CHECK(dz.invariant_factors().empty());
    CHECK(to_sparse(dz.U) == SpMat::identity(3));
    CHECK(to_sparse(dz.V) == SpMat::identity(2));
}

TEST_CASE("smith normal form agrees with minors oracle on random matrices") {
    std::mt19937 rng(12345);
    for (int iter = 0; iter < 200; ++iter) {
        SpMat m = random_matrix(rng, 5, 9);
        auto d = smith_normal_form(m);
        REQUIRE(smith_check(m, d));
        CHECK(d.invariant_factors() == factors_by_minors(m));
    }
}

TEST_CASE("smith normal form is deterministic") {
    std::mt19937 rng(7);
    SpMat m = random_matrix(rng, 5, 9);
    auto d1 = smith_normal_form(m);
    auto d2 = smith_normal_form(m);
    CHECK(to_sparse(d1.U) == to_sparse(d2.U));
    CHECK(to_sparse(d1.V) == to_sparse(d2.V));
    CHECK(to_sparse(d1.S) == to_sparse(d2.S));
}

TEST_CASE("preimage solve") {
    SpMat a(1, 1);
    a.set_entry(0, 0, 2);
    auto x = preimage_solve(a, {Int(4)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == 2);
    CHECK(!preimage_solve(a, {Int(3)}).has_value());

    std::mt19937 rng(99);
    std::uniform_int_distribution<int> val(-4, 4);
    for (int iter = 0; iter < 100; ++iter) {
        SpMat m = random_matrix(rng, 4, 5);
        std::vector<Int> x0(m.cols());
        for (auto& v : x0) v = val(rng);
        std::vector<Int> b = m.apply(x0);
        auto sol = preimage_solve(m, b);
        REQUIRE(sol.has_value());
        CHECK(m.apply(*sol) == b);
    }
}

TEST_CASE("kernel basis is a kernel and is deterministic") {
    std::mt19937 rng(4242);
    for (int iter = 0; iter < 60; ++iter) {
        SpMat m = random_matrix(rng, 5, 4);
        SpMat k = kernel_basis(m);
        CHECK((m * k).is_zero());
        CHECK(rank_q(k) == k.cols());
        CHECK(rank_q(m) + k.cols() == m.cols());
        CHECK(kernel_basis(m) == k);
    }
}

TEST_CASE("ranks over Q and F_p") {
    SpMat a(2, 2);
    a.set_entry(0, 0, 3);
    a.set_entry(1, 1, 3);
    CHECK(rank_q(a) == 2);
    CHECK(rank_mod_p(a, 3) == 0);
    CHECK(rank_mod_p(a, 2) == 2);

    std::mt19937 rng(31415);
    for (int iter = 0; iter < 60; ++iter) {
        SpMat m = random_matrix(rng, 5, 3);
        auto d = smith_normal_form(m);
        CHECK(rank_q(m) == d.rank);
        int r2 = 0;
        for (const Int& f : d.invariant_factors())
            if (f % 2 != 0) ++r2;
        CHECK(rank_mod_p(m, 2) == r2);
    }
}
