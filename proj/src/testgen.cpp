#include "zrc/testgen.hpp"

#include "zrc/snf.hpp"

namespace zrc {

int TestGen::uniform(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(rng);
}

BasedComplex TestGen::random_complex(int max_rank, int max_degrees, int max_entry) {
    int degs = uniform(1, max_degrees);
    std::vector<int> ranks(degs);
    for (int& r : ranks) r = uniform(0, max_rank);
    std::map<int, SpMat> diffs;
    SpMat prev;  // d_{j-1}, empty marker for the bottom degree
    bool have_prev = false;
    for (int j = 1; j < degs; ++j) {
        SpMat d(ranks[j - 1], ranks[j]);
        if (ranks[j - 1] > 0 && ranks[j] > 0) {
            SpMat ker = have_prev ? kernel_basis(prev) : SpMat::identity(ranks[j - 1]);
            for (int c = 0; c < ranks[j]; ++c) {
                // small integer combination of kernel columns, clamped by rejection
                for (int attempt = 0; attempt < 4; ++attempt) {
                    std::vector<Int> col(ranks[j - 1]);
                    for (int k = 0; k < ker.cols(); ++k) {
                        int coeff = uniform(-1, 1);
                        if (coeff == 0) continue;
                        for (const auto& [r, v] : ker.column(k)) col[r] += coeff * v;
                    }
                    bool ok = true;
                    for (const Int& v : col)
                        if (abs(v) > max_entry) ok = false;
                    if (!ok) continue;
                    for (int r = 0; r < ranks[j - 1]; ++r) d.set_entry(r, c, col[r]);
                    break;
                }
            }
        }
        prev = d;
        have_prev = true;
        if (!d.is_zero()) diffs[j] = std::move(d);
    }
    return BasedComplex::make_auto(uniform(-1, 1), ranks, std::move(diffs));
}

std::map<int, SpMat> TestGen::random_graded(const BasedComplex& src, const BasedComplex& tgt,
                                            int shift, int max_entry) {
    std::map<int, SpMat> out;
    if (src.empty() || tgt.empty()) return out;
    for (int j = src.min_degree(); j <= src.max_degree(); ++j) {
        int rows = tgt.rank(j + shift), cols = src.rank(j);
        if (rows == 0 || cols == 0) continue;
        SpMat m(rows, cols);
        for (int c = 0; c < cols; ++c)
            for (int r = 0; r < rows; ++r) {
                int v = uniform(-max_entry, max_entry);
                if (v != 0 && uniform(0, 2) == 0) m.set_entry(r, c, v);
            }
        if (!m.is_zero()) out[j] = std::move(m);
    }
    return out;
}

ChainMap TestGen::random_chain_map(ComplexPtr src, ComplexPtr tgt, int max_entry) {
    std::map<int, SpMat> h = random_graded(*src, *tgt, 1, max_entry);
    ChainMap f{src, tgt, {}};
    if (src->empty() || tgt->empty()) return f;
    auto hat = [&](int j) {
        auto it = h.find(j);
        if (it != h.end()) return it->second;
        return SpMat::zero(tgt->rank(j + 1), src->rank(j));
    };
    for (int j = std::min(src->min_degree(), tgt->min_degree());
         j <= std::max(src->max_degree(), tgt->max_degree()); ++j) {
        SpMat m = tgt->diff(j + 1) * hat(j) + hat(j - 1) * src->diff(j);
        if (!m.is_zero()) f.set(j, std::move(m));
    }
    f.verify_or_throw("random_chain_map");
    return f;
}

ChainMap TestGen::random_self_map(ComplexPtr x, int max_entry) {
    ChainMap f = random_chain_map(x, x, max_entry);
    int c = uniform(-2, 2);
    if (c != 0) f = map_add(f, map_scale(ChainMap::identity(x), c));
    f.verify_or_throw("random_self_map");
    return f;
}

HomotopyRetract TestGen::random_padded_retract(ComplexPtr x, int max_rank, int max_entry) {
    BasedComplex a = random_complex(max_rank, 3, max_entry);
    ConeData ca = cone(ChainMap::identity(share(a)));
    ComplexPtr xp = share(direct_sum(*x, *ca.cone));

    ChainMap incl{x, xp, {}};
    ChainMap proj{xp, x, {}};
    if (!x->empty())
        for (int j = xp->min_degree(); j <= xp->max_degree(); ++j) {
            int rx = x->rank(j), rc = ca.cone->rank(j);
            if (rx == 0 && rc == 0) continue;
            if (rx > 0) {
                incl.set(j, SpMat::vstack(SpMat::identity(rx), SpMat::zero(rc, rx)));
                proj.set(j, SpMat::hstack(SpMat::identity(rx), SpMat::zero(rx, rc)));
            }
        }
    incl.verify_or_throw("random_padded_retract: inclusion");
    proj.verify_or_throw("random_padded_retract: projection");

    // perturb the inclusion by a nullhomotopic map; the homotopy is -proj o h
    std::map<int, SpMat> h = random_graded(*x, *xp, 1, max_entry);
    GradedMap hg{x, xp, 1, h};
    ChainMap xi = incl;
    std::map<int, SpMat> Xi;
    if (!x->empty())
        for (int j = x->min_degree(); j <= x->max_degree(); ++j) {
            SpMat pert = xp->diff(j + 1) * hg.at(j) + hg.at(j - 1) * x->diff(j);
            SpMat m = xi.at(j) + pert;
            if (!m.is_zero())
                xi.set(j, std::move(m));
            else
                xi.set(j, SpMat::zero(xp->rank(j), x->rank(j)));
            SpMat hom = -(proj.at(j + 1) * hg.at(j));
            if (!hom.is_zero()) Xi[j] = std::move(hom);
        }
    return verify_retract(x, xp, xi, proj, std::move(Xi));
}

}  // namespace zrc
