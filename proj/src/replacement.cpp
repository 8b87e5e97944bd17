#include "zrc/replacement.hpp"

namespace zrc {

ModuleResolution trivial_resolution(int rank, const std::vector<std::string>& labels) {
    ModuleResolution out;
    out.P = rank == 0 ? BasedComplex()
                      : BasedComplex::make(0, {rank}, {labels}, {});
    out.eps = SpMat::identity(rank);
    return out;
}

namespace {

// P together with eps : P_0 ->> M is a resolution of the free module M iff
// the complex  ... -> P_1 -> P_0 --eps--> M -> 0  is acyclic.
void check_resolution(const ModuleResolution& res, int module_rank, int degree) {
    const BasedComplex& P = res.P;
    if (!P.empty() && P.min_degree() < 0)
        throw Error("projective_replacement: resolution of degree " + std::to_string(degree) +
                    " has negative degrees");
    if (res.eps.rows() != module_rank || res.eps.cols() != P.rank(0))
        throw Error("projective_replacement: augmentation of degree " + std::to_string(degree) +
                    " has wrong shape");
    int hi = P.empty() ? -1 : P.max_degree();
    std::vector<int> ranks{module_rank};
    std::map<int, SpMat> diffs;
    if (!res.eps.is_zero()) diffs[0] = res.eps;
    for (int j = 0; j <= hi; ++j) {
        ranks.push_back(P.rank(j));
        SpMat d = P.diff(j + 1);
        if (!d.is_zero()) diffs[j + 1] = std::move(d);
    }
    BasedComplex q = BasedComplex::make_auto(-1, ranks, std::move(diffs), "r", false);
    ValidationReport rep = validate(q);
    if (!rep.ok())
        throw Error("projective_replacement: degree " + std::to_string(degree) +
                    " input is not a complex over the module: " + rep.joined());
    if (!is_acyclic(q))
        throw Error("projective_replacement: degree " + std::to_string(degree) +
                    " input is not a resolution (nonzero homology or wrong augmentation)");
}

}  // namespace

ProjectiveReplacement projective_replacement(const BasedComplex& x,
                                             const std::vector<ModuleResolution>& resolutions) {
    if (!x.empty() && x.min_degree() < 0)
        throw Error("projective_replacement: complex has negative degrees");
    int top = x.empty() ? -1 : x.max_degree();
    if (static_cast<int>(resolutions.size()) < top + 1)
        throw Error("projective_replacement: need one resolution per degree");
    for (int j = 0; j <= top; ++j) check_resolution(resolutions[j], x.rank(j), j);

    ProjectiveReplacement out;
    if (x.empty()) {
        out.Xhat = share(BasedComplex());
        out.q = ChainMap::zero(out.Xhat, share(x));
        return out;
    }

    // stage 0
    ReplacementStage st0;
    st0.k = 0;
    st0.stage = share(resolutions[0].P);
    ComplexPtr skel0 = share(skeleton(x, 0));
    st0.q = ChainMap{st0.stage, skel0, {}};
    if (!resolutions[0].eps.is_zero()) st0.q.set(0, resolutions[0].eps);
    st0.q.verify_or_throw("projective_replacement: q^0");
    st0.lifted = ChainMap::zero(st0.stage, st0.stage);
    st0.lift_hom = ChainHomotopy::zero(st0.lifted);
    out.filtration.push_back(st0);

    for (int k = 1; k <= top; ++k) {
        const ReplacementStage& prev = out.filtration.back();

        ComplexPtr F = share(suspend(resolutions[k].P, k - 1));
        ComplexPtr skel_prev = prev.q.tgt;

        // u = d_k o Sigma^{k-1} eps^k, concentrated in degree k-1
        ChainMap u{F, skel_prev, {}};
        {
            SpMat m = x.diff(k) * resolutions[k].eps;
            if (!m.is_zero()) u.set(k - 1, std::move(m));
        }
        u.verify_or_throw("projective_replacement: boundary against augmentation");

        // lift u through the weak equivalence q^{k-1}
        HomotopyInverse inv = homotopy_inverse(prev.q);
        ChainMap lifted = compose(inv.r, u);
        lifted.verify_or_throw("projective_replacement: lifted boundary");
        ChainHomotopy hom{u, compose(prev.q, lifted), {}};
        for (int j = F->min_degree(); j <= F->max_degree(); ++j) {
            SpMat m = inv.h_tgt.at(j) * u.at(j);
            if (!m.is_zero()) hom.comp[j] = std::move(m);
        }
        hom.verify_or_throw("projective_replacement: lift homotopy");

        // Xhat^[k] = Cone(lifted); q^k is the induced map of cones onto
        // X^(k) = Cone(d_k : Sigma^{k-1} X_k -> X^(k-1)).
        ConeData cone_hat = cone(lifted);
        ComplexPtr sk_top = share(suspend(
            BasedComplex::make(0, {x.rank(k)}, {x.labels(k)}, {}), k - 1));
        ChainMap g{sk_top, skel_prev, {}};
        {
            SpMat m = x.diff(k);
            if (!m.is_zero()) g.set(k - 1, std::move(m));
        }
        ChainMap a{F, sk_top, {}};
        {
            SpMat m = resolutions[k].eps;
            if (!m.is_zero()) a.set(k - 1, std::move(m));
        }
        HomotopySquare sq{lifted, g, a, prev.q, hom};
        ConeData cone_skel = cone(g);
        ChainMap qk = cone_map(sq, cone_hat, cone_skel);

        ComplexPtr skel_k = share(skeleton(x, k));
        if (!cone_skel.cone->same_shape(*skel_k))
            throw Error("projective_replacement: cone of the skeleton map is not the skeleton");
        ReplacementStage st;
        st.k = k;
        st.stage = cone_hat.cone;
        st.q = ChainMap{cone_hat.cone, skel_k, qk.comp};
        st.q.verify_or_throw("projective_replacement: q^k");
        st.lifted = lifted;
        st.lift_hom = hom;
        out.filtration.push_back(st);
    }

    const ReplacementStage& last = out.filtration.back();
    out.Xhat = last.stage;
    out.q = ChainMap{out.Xhat, share(x), last.q.comp};
    out.q.verify_or_throw("projective_replacement: q");

    if (!is_acyclic(*cone(out.q).cone))
        throw Error("projective_replacement: q is not a weak equivalence");
    if (!homology_equal(*out.Xhat, x))
        throw Error("projective_replacement: homology mismatch");
    return out;
}

}  // namespace zrc
