#include "zrc/htpy.hpp"

#include <algorithm>

namespace zrc {

HomotopyRetract verify_retract(ComplexPtr x, ComplexPtr xp, ChainMap xi, ChainMap xi_p,
                               std::map<int, SpMat> Xi_comp) {
    xi.verify_or_throw("verify_retract: xi");
    xi_p.verify_or_throw("verify_retract: xi'");
    if (!xi.src->same_shape(*x) || !xi.tgt->same_shape(*xp) || !xi_p.src->same_shape(*xp) ||
        !xi_p.tgt->same_shape(*x))
        throw Error("verify_retract: endpoint mismatch");
    ChainHomotopy Xi{ChainMap::identity(x), compose(xi_p, xi), std::move(Xi_comp)};
    Xi.verify_or_throw("verify_retract: Xi");
    return HomotopyRetract{std::move(x), std::move(xp), std::move(xi), std::move(xi_p),
                           std::move(Xi)};
}

HomotopyRetract identity_retract(ComplexPtr x) {
    ChainMap id = ChainMap::identity(x);
    return verify_retract(x, x, id, id, {});
}

SpMat Contraction::at(int j) const {
    auto it = s.find(j);
    if (it != s.end()) return it->second;
    return SpMat::zero(X->rank(j + 1), X->rank(j));
}

void Contraction::verify_or_throw() const {
    if (X->empty()) return;
    for (int j = X->min_degree(); j <= X->max_degree(); ++j) {
        SpMat lhs = X->diff(j + 1) * at(j) + at(j - 1) * X->diff(j);
        if (lhs != SpMat::identity(X->rank(j)))
            throw Error("contraction identity fails at degree " + std::to_string(j));
    }
}

Contraction contract_acyclic(const BasedComplex& x) {
    Contraction out{share(x), {}};
    if (x.empty()) return out;
    for (int j = x.min_degree(); j <= x.max_degree(); ++j) {
        HomologyGroup h = integer_homology(x, j);
        if (sgn(h.betti) != 0 || !h.torsion_factors.empty())
            throw Error("contract_acyclic: input is not acyclic at degree " + std::to_string(j));
    }
    const BasedComplex& X = *out.X;
    for (int j = X.min_degree(); j < X.max_degree(); ++j) {
        // solve d_{j+1} s_j = id - s_{j-1} d_j columnwise
        SpMat rhs = SpMat::identity(X.rank(j)) - out.at(j - 1) * X.diff(j);
        SpMat d = X.diff(j + 1);
        SmithDecomposition snf = smith_normal_form(d);
        SpMat sj(X.rank(j + 1), X.rank(j));
        std::vector<Int> col(rhs.rows());
        for (int c = 0; c < rhs.cols(); ++c) {
            std::fill(col.begin(), col.end(), Int(0));
            for (const auto& [r, v] : rhs.column(c)) col[r] = v;
            auto sol = preimage_solve(snf, col);
            if (!sol)
                throw Error("contract_acyclic: no integral preimage at degree " +
                            std::to_string(j));
            for (int r = 0; r < sj.rows(); ++r) sj.add_entry(r, c, (*sol)[r]);
        }
        if (!sj.is_zero()) out.s[j] = std::move(sj);
    }
    out.verify_or_throw();
    return out;
}

HomotopyInverse homotopy_inverse(const ChainMap& q) {
    q.verify_or_throw("homotopy_inverse: q");
    ConeData cq = cone(q);
    if (!is_acyclic(*cq.cone))
        throw Error("homotopy_inverse: q is not a weak equivalence (cone has homology)");
    Contraction s = contract_acyclic(*cq.cone);

    const ComplexPtr& C = q.src;
    const ComplexPtr& D = q.tgt;

    // Cone(q)_j = C_{j-1} (+) D_j.  Write s_j in blocks
    //   [ a_j  b_j ]   a_j : C_{j-1} -> C_j,  b_j : D_j -> C_j,
    //   [ c_j  e_j ]   c_j : C_{j-1} -> D_{j+1},  e_j : D_j -> D_{j+1}.
    // Then r := b is a chain map, -a : id_C ~ r q and e : id_D ~ q r.
    HomotopyInverse out{ChainMap{D, C, {}},
                       ChainHomotopy{ChainMap::identity(C), ChainMap{C, C, {}}, {}},
                       ChainHomotopy{ChainMap::identity(D), ChainMap{D, D, {}}, {}}};
    int lo = cq.cone->empty() ? 0 : cq.cone->min_degree();
    int hi = cq.cone->empty() ? -1 : cq.cone->max_degree();
    for (int j = lo; j <= hi; ++j) {
        SpMat sj = s.at(j);
        int rc_prev = C->rank(j - 1), rd = D->rank(j);
        int rc = C->rank(j), rd_next = D->rank(j + 1);
        std::vector<int> crows(rc), drows(rd_next), ccols(rc_prev), dcols(rd);
        for (int i = 0; i < rc; ++i) crows[i] = i;
        for (int i = 0; i < rd_next; ++i) drows[i] = rc + i;
        for (int i = 0; i < rc_prev; ++i) ccols[i] = i;
        for (int i = 0; i < rd; ++i) dcols[i] = rc_prev + i;
        SpMat b = sj.select(crows, dcols);
        SpMat a = sj.select(crows, ccols);
        SpMat e = sj.select(drows, dcols);
        if (!b.is_zero()) out.r.set(j, b);
        if (!a.is_zero()) out.h_src.comp[j - 1] = -a;
        if (!e.is_zero()) out.h_tgt.comp[j] = e;
    }
    out.r.verify_or_throw("homotopy_inverse: r");
    out.h_src.to_map = compose(out.r, q);
    out.h_tgt.to_map = compose(q, out.r);
    out.h_src.verify_or_throw("homotopy_inverse: homotopy on source");
    out.h_tgt.verify_or_throw("homotopy_inverse: homotopy on target");
    return out;
}

AugmentedComplex augment(const BasedComplex& x) {
    if (!x.empty() && x.min_degree() < 0) throw Error("augment: complex has negative degrees");
    SpMat eps(1, x.rank(0));
    for (int c = 0; c < x.rank(0); ++c) eps.set_entry(0, c, 1);
    if (!(eps * x.diff(1)).is_zero()) throw Error("augment: eps o d_1 != 0");

    int hi = x.empty() ? -1 : x.max_degree();
    std::vector<int> ranks{1};
    std::vector<std::vector<std::string>> labels{{"aug"}};
    std::map<int, SpMat> diffs;
    if (!eps.is_zero()) diffs[0] = eps;
    for (int j = 0; j <= hi; ++j) {
        ranks.push_back(x.rank(j));
        labels.push_back(x.labels(j));
        SpMat d = x.diff(j + 1);
        if (j + 1 <= hi && !d.is_zero()) diffs[j + 1] = std::move(d);
    }
    AugmentedComplex out;
    out.base = share(x);
    out.eps = eps;
    out.eps_complex = share(BasedComplex::make(-1, std::move(ranks), std::move(labels),
                                               std::move(diffs)));
    return out;
}

BasedComplex plus_construction(const BasedComplex& y) {
    if (!y.empty() && y.min_degree() < 0)
        throw Error("plus_construction: complex has negative degrees");
    int hi = y.empty() ? 0 : std::max(0, y.max_degree());
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, SpMat> diffs;
    for (int j = 0; j <= hi; ++j) {
        if (j == 0) {
            ranks.push_back(y.rank(0) + 1);
            std::vector<std::string> lab = y.labels(0);
            lab.push_back("plus");
            labels.push_back(std::move(lab));
        } else {
            ranks.push_back(y.rank(j));
            labels.push_back(y.labels(j));
            SpMat d = y.diff(j);
            if (j == 1) d = SpMat::vstack(d, SpMat::zero(1, y.rank(1)));
            if (!d.is_zero()) diffs[j] = std::move(d);
        }
    }
    return BasedComplex::make(0, std::move(ranks), std::move(labels), std::move(diffs));
}

ChainMap BasedInclusion::incl_map() const {
    ChainMap f{A, X, {}};
    for (const auto& [j, idx] : pos) {
        SpMat m(X->rank(j), A->rank(j));
        for (size_t i = 0; i < idx.size(); ++i) m.set_entry(idx[i], static_cast<int>(i), 1);
        if (!m.is_zero()) f.set(j, std::move(m));
    }
    return f;
}

BasedInclusion based_inclusion(ComplexPtr x, ComplexPtr a, std::map<int, std::vector<int>> pos) {
    BasedInclusion out{std::move(x), std::move(a), std::move(pos)};
    if (!out.A->empty())
        for (int j = out.A->min_degree(); j <= out.A->max_degree(); ++j) {
            const auto& idx = out.pos.count(j) ? out.pos.at(j) : std::vector<int>{};
            if (static_cast<int>(idx.size()) != out.A->rank(j))
                throw Error("based_inclusion: index count != rank at degree " + std::to_string(j));
            for (size_t i = 0; i < idx.size(); ++i) {
                if (idx[i] < 0 || idx[i] >= out.X->rank(j))
                    throw Error("based_inclusion: index out of range");
                if (i > 0 && idx[i] <= idx[i - 1])
                    throw Error("based_inclusion: indices must be strictly increasing");
            }
        }
    out.incl_map().verify_or_throw("based_inclusion: not a subcomplex");
    return out;
}

BasedInclusion based_inclusion_by_labels(ComplexPtr x, ComplexPtr a) {
    std::map<int, std::vector<int>> pos;
    if (!a->empty())
        for (int j = a->min_degree(); j <= a->max_degree(); ++j) {
            const auto& xl = x->labels(j);
            std::vector<int> idx;
            for (const auto& l : a->labels(j)) {
                auto it = std::find(xl.begin(), xl.end(), l);
                if (it == xl.end())
                    throw Error("based_inclusion_by_labels: label \"" + l + "\" not found");
                idx.push_back(static_cast<int>(it - xl.begin()));
            }
            pos[j] = std::move(idx);
        }
    return based_inclusion(std::move(x), std::move(a), std::move(pos));
}

QuotientResult quotient_complex(const BasedInclusion& incl) {
    const BasedComplex& X = *incl.X;
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, std::vector<int>> keep;
    int lo = X.empty() ? 0 : X.min_degree();
    int hi = X.empty() ? -1 : X.max_degree();
    for (int j = lo; j <= hi; ++j) {
        std::vector<char> in_a(X.rank(j), 0);
        if (incl.pos.count(j))
            for (int i : incl.pos.at(j)) in_a[i] = 1;
        std::vector<int> k;
        std::vector<std::string> lab;
        for (int i = 0; i < X.rank(j); ++i)
            if (!in_a[i]) {
                k.push_back(i);
                lab.push_back(X.labels(j)[i]);
            }
        keep[j] = std::move(k);
        ranks.push_back(static_cast<int>(keep[j].size()));
        labels.push_back(std::move(lab));
    }
    std::map<int, SpMat> diffs;
    for (int j = lo + 1; j <= hi; ++j) {
        SpMat d = X.diff(j).select(keep[j - 1], keep[j]);
        if (!d.is_zero()) diffs[j] = std::move(d);
    }
    QuotientResult out;
    out.Y = share(BasedComplex::make(lo, std::move(ranks), std::move(labels), std::move(diffs)));
    out.proj = ChainMap{incl.X, out.Y, {}};
    for (int j = lo; j <= hi; ++j) {
        SpMat m(out.Y->rank(j), X.rank(j));
        for (size_t i = 0; i < keep[j].size(); ++i) m.set_entry(static_cast<int>(i), keep[j][i], 1);
        if (!m.is_zero()) out.proj.set(j, std::move(m));
    }
    out.proj.verify_or_throw("quotient_complex: projection");
    return out;
}

AugmentedRetractResult augmented_retract(const BasedInclusion& incl,
                                         std::optional<std::map<int, SpMat>> H_null_comp) {
    AugmentedComplex Xe = augment(*incl.X);
    AugmentedComplex Ae = augment(*incl.A);

    // f^eps : A^eps -> X^eps
    ChainMap f_eps{Ae.eps_complex, Xe.eps_complex, {}};
    {
        SpMat m(1, 1);
        m.set_entry(0, 0, 1);
        f_eps.set(-1, std::move(m));
    }
    ChainMap f = incl.incl_map();
    for (const auto& [j, m] : f.comp) f_eps.set(j, m);
    f_eps.verify_or_throw("augmented_retract: f^eps");

    ChainHomotopy H_null{f_eps, ChainMap::zero(Ae.eps_complex, Xe.eps_complex), {}};
    if (H_null_comp) {
        H_null.comp = std::move(*H_null_comp);
        H_null.verify_or_throw("augmented_retract: supplied nullhomotopy");
    } else {
        Contraction s = contract_acyclic(*Xe.eps_complex);
        for (int j = Ae.eps_complex->min_degree(); j <= Ae.eps_complex->max_degree(); ++j) {
            SpMat m = s.at(j) * f_eps.at(j);
            if (!m.is_zero()) H_null.comp[j] = std::move(m);
        }
        H_null.verify_or_throw("augmented_retract: computed nullhomotopy");
    }

    // quotient Y = X / A, and q : Cone(f^eps) -> Y
    QuotientResult quo = quotient_complex(incl);
    ChainMap g_eps{Xe.eps_complex, quo.Y, {}};
    for (const auto& [j, m] : quo.proj.comp)
        if (j >= 0) g_eps.set(j, m);
    g_eps.verify_or_throw("augmented_retract: g on X^eps");

    ConeData cf = cone(f_eps);
    ChainMap q{cf.cone, quo.Y, {}};
    if (!cf.cone->empty())
        for (int j = cf.cone->min_degree(); j <= cf.cone->max_degree(); ++j) {
            int ra = Ae.eps_complex->rank(j - 1);
            SpMat m = SpMat::hstack(SpMat::zero(quo.Y->rank(j), ra), g_eps.at(j));
            if (!m.is_zero()) q.set(j, std::move(m));
        }
    q.verify_or_throw("augmented_retract: q");

    HomotopyInverse inv = homotopy_inverse(q);

    // u = p2 o (id_A, id_X; H_null) : Cone(f^eps) -> X^eps,  (a,x) -> x - H a
    ChainMap u{cf.cone, Xe.eps_complex, {}};
    if (!cf.cone->empty())
        for (int j = cf.cone->min_degree(); j <= cf.cone->max_degree(); ++j) {
            SpMat m = SpMat::hstack(-H_null.at(j - 1), SpMat::identity(Xe.eps_complex->rank(j)));
            if (!m.is_zero()) u.set(j, std::move(m));
        }
    u.verify_or_throw("augmented_retract: u");

    ChainMap h = compose(u, inv.r);  // Y -> X^eps

    // iota_X : X^eps -> Cone(f^eps), x -> (0, x)
    ChainMap iota = cf.iota;

    // Hom^eps = u o R o iota with R : id_Cone ~ r q
    ChainHomotopy Hom_eps{ChainMap::identity(Xe.eps_complex), compose(h, g_eps), {}};
    for (int j = Xe.eps_complex->min_degree(); j <= Xe.eps_complex->max_degree(); ++j) {
        SpMat m = u.at(j + 1) * inv.h_src.at(j) * iota.at(j);
        if (!m.is_zero()) Hom_eps.comp[j] = std::move(m);
    }
    Hom_eps.verify_or_throw("augmented_retract: homotopy on X^eps");

    // assemble Y^+, g^+, h^+
    AugmentedRetractResult out;
    out.Y = quo.Y;
    out.Yplus = share(plus_construction(*quo.Y));
    out.gplus = ChainMap{incl.X, out.Yplus, {}};
    out.hplus = ChainMap{out.Yplus, incl.X, {}};
    int hi = incl.X->empty() ? -1 : incl.X->max_degree();
    for (int j = 0; j <= hi; ++j) {
        if (j == 0) {
            SpMat g0 = SpMat::vstack(quo.proj.at(0), Xe.eps);
            if (!g0.is_zero()) out.gplus.set(0, std::move(g0));
            SpMat h0 = SpMat::hstack(h.at(0), Hom_eps.at(-1));
            if (!h0.is_zero()) out.hplus.set(0, std::move(h0));
        } else {
            SpMat gj = quo.proj.at(j);
            if (!gj.is_zero()) out.gplus.set(j, std::move(gj));
            SpMat hj = h.at(j);
            if (!hj.is_zero()) out.hplus.set(j, std::move(hj));
        }
    }
    out.gplus.verify_or_throw("augmented_retract: g^+");
    out.hplus.verify_or_throw("augmented_retract: h^+");

    std::map<int, SpMat> Hom_comp;
    for (const auto& [j, m] : Hom_eps.comp)
        if (j >= 0) Hom_comp[j] = m;
    out.retract = verify_retract(incl.X, out.Yplus, out.gplus, out.hplus, Hom_comp);
    out.Hom = out.retract.Xi;
    out.gplus = out.retract.xi;
    out.hplus = out.retract.xi_p;
    return out;
}

QuotientQuality quality_from_quotient(const BasedComplex& x, const BasedComplex& yplus, int n) {
    QuotientQuality out;
    bool have = false;
    Rat best;
    for (int j = 0; j <= n; ++j) {
        if (yplus.rank(j) == 0) continue;  // empty module imposes no constraint
        Rat ratio(x.rank(j), yplus.rank(j));
        ratio.canonicalize();
        if (!have || ratio < best) {
            best = ratio;
            have = true;
        }
    }
    out.T_prime = have ? best : Rat(x.rank(0));  // empty index set: capped for reporting
    Int nrm = complex_norm(x, n);
    double lp = log_plus_mpz(nrm);
    out.kappa = std::max(1.0, lp);
    out.kappa_is_one = lp <= 1.0;
    return out;
}

}  // namespace zrc
