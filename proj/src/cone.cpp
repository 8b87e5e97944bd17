#include "zrc/cone.hpp"

#include <algorithm>

#include "zrc/snf.hpp"

namespace zrc {

ConeData cone(const ChainMap& f) {
    f.verify_or_throw("cone: input is not a chain map");
    const ComplexPtr& X = f.src;
    const ComplexPtr& Y = f.tgt;

    int lo = 0, hi = -1;
    if (!X->empty() || !Y->empty()) {
        lo = std::min(X->empty() ? INT32_MAX : X->min_degree() + 1,
                      Y->empty() ? INT32_MAX : Y->min_degree());
        hi = std::max(X->empty() ? INT32_MIN : X->max_degree() + 1,
                      Y->empty() ? INT32_MIN : Y->max_degree());
    }

    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, SpMat> diffs;
    for (int j = lo; j <= hi; ++j) {
        ranks.push_back(X->rank(j - 1) + Y->rank(j));
        std::vector<std::string> lab;
        for (const auto& l : X->labels(j - 1)) lab.push_back("cx:" + l);
        for (const auto& l : Y->labels(j)) lab.push_back("cy:" + l);
        labels.push_back(std::move(lab));
        if (j > lo) {
            SpMat d = SpMat::block2x2(-X->diff(j - 1), SpMat::zero(X->rank(j - 2), Y->rank(j)),
                                      f.at(j - 1), Y->diff(j));
            if (!d.is_zero()) diffs[j] = std::move(d);
        }
    }

    ConeData out;
    out.f = f;
    out.cone = share(BasedComplex::make(lo, std::move(ranks), std::move(labels), std::move(diffs)));

    ComplexPtr sx = share(suspend(*X, 1));
    out.iota = ChainMap{Y, out.cone, {}};
    out.pi = ChainMap{out.cone, sx, {}};
    out.sigma = GradedMap{out.cone, Y, 0, {}};
    for (int j = lo; j <= hi; ++j) {
        int rx = X->rank(j - 1), ry = Y->rank(j);
        if (ry > 0)
            out.iota.set(j, SpMat::vstack(SpMat::zero(rx, ry), SpMat::identity(ry)));
        if (rx > 0) out.pi.set(j, SpMat::hstack(SpMat::identity(rx), SpMat::zero(rx, ry)));
        if (ry > 0) out.sigma.set(j, SpMat::hstack(SpMat::zero(ry, rx), SpMat::identity(ry)));
    }
    out.iota.verify_or_throw("cone: iota");
    out.pi.verify_or_throw("cone: pi");
    for (int j = lo; j <= hi; ++j) {
        if (!(out.pi.at(j) * out.iota.at(j)).is_zero()) throw Error("cone: pi o iota != 0");
        if (out.sigma.at(j) * out.iota.at(j) != SpMat::identity(Y->rank(j)))
            throw Error("cone: sigma o iota != id");
    }
    return out;
}

ValidationReport HomotopySquare::verify() const {
    ValidationReport rep;
    auto check = [&rep](const ChainMap& m, const char* name) {
        ValidationReport r = m.verify();
        for (auto& s : r.issues) rep.issues.push_back(std::string(name) + ": " + s);
    };
    check(f, "f");
    check(g, "g");
    check(a, "a");
    check(b, "b");
    if (!a.src->same_shape(*f.src) || !a.tgt->same_shape(*g.src) || !b.src->same_shape(*f.tgt) ||
        !b.tgt->same_shape(*g.tgt))
        rep.issues.push_back("square corners do not match");
    if (!rep.ok()) return rep;
    ValidationReport r = H.verify();
    for (auto& s : r.issues) rep.issues.push_back("H: " + s);
    return rep;
}

void HomotopySquare::verify_or_throw(const std::string& what) const {
    ValidationReport rep = verify();
    if (!rep.ok()) throw Error(what + ": " + rep.joined());
}

HomotopySquare make_square(ChainMap f, ChainMap g, ChainMap a, ChainMap b,
                           std::map<int, SpMat> h_comp, bool check) {
    HomotopySquare sq{f, g, a, b, ChainHomotopy{compose(g, a), compose(b, f), std::move(h_comp)}};
    if (check) sq.verify_or_throw("make_square");
    return sq;
}

ChainMap cone_map(const HomotopySquare& square, const ConeData& cf, const ConeData& cg) {
    square.verify_or_throw("cone_map: invalid square");
    ChainMap out{cf.cone, cg.cone, {}};
    int lo = cf.cone->empty() ? 0 : cf.cone->min_degree();
    int hi = cf.cone->empty() ? -1 : cf.cone->max_degree();
    for (int j = lo; j <= hi; ++j) {
        const ComplexPtr& X = square.f.src;
        const ComplexPtr& Y = square.f.tgt;
        const ComplexPtr& Z = square.g.src;
        const ComplexPtr& W = square.g.tgt;
        SpMat m = SpMat::block2x2(square.a.at(j - 1), SpMat::zero(Z->rank(j - 1), Y->rank(j)),
                                  -square.H.at(j - 1), square.b.at(j));
        (void)X;
        (void)W;
        if (!m.is_zero()) out.set(j, std::move(m));
    }
    out.verify_or_throw("cone_map: induced map");
    return out;
}

ChainMap cone_map(const HomotopySquare& square) {
    return cone_map(square, cone(square.f), cone(square.g));
}

ValidationReport HomotopyCube::verify() const {
    ValidationReport rep;
    auto face = [&rep](const HomotopySquare& s, const char* name) {
        ValidationReport r = s.verify();
        for (auto& m : r.issues) rep.issues.push_back(std::string(name) + ": " + m);
    };
    face(HomotopySquare{f, g, a, b, H}, "inner");
    face(HomotopySquare{fp, gp, ap, bp, Hp}, "outer");
    face(HomotopySquare{a, ap, xi, zeta, A}, "left");
    face(HomotopySquare{b, bp, ups, omega, B}, "right");
    face(HomotopySquare{f, fp, xi, ups, F}, "top");
    face(HomotopySquare{g, gp, zeta, omega, G}, "bottom");
    if (!rep.ok()) return rep;

    const ComplexPtr& X = f.src;
    const ComplexPtr& Wp = gp.tgt;
    int lo = X->empty() ? 0 : X->min_degree();
    int hi = X->empty() ? -1 : X->max_degree();
    for (int j = lo; j <= hi; ++j) {
        SpMat lhs = Wp->diff(j + 2) * Phi.at(j) - Phi.at(j - 1) * X->diff(j);
        SpMat rhs = omega.at(j + 1) * H.at(j) - Hp.at(j) * xi.at(j) + B.at(j) * f.at(j) -
                    gp.at(j + 1) * A.at(j) + G.at(j) * a.at(j) - bp.at(j + 1) * F.at(j);
        if (lhs != rhs)
            rep.issues.push_back("filler identity fails at degree " + std::to_string(j));
    }
    return rep;
}

void HomotopyCube::verify_or_throw(const std::string& what) const {
    ValidationReport rep = verify();
    if (!rep.ok()) throw Error(what + ": " + rep.joined());
}

HomotopySquare cube_fill_square(const HomotopyCube& cube) {
    cube.verify_or_throw("cube_fill_square: invalid cube");

    ConeData cf = cone(cube.f);
    ConeData cfp = cone(cube.fp);
    ConeData cg = cone(cube.g);
    ConeData cgp = cone(cube.gp);

    ChainMap top = cone_map(HomotopySquare{cube.f, cube.fp, cube.xi, cube.ups, cube.F}, cf, cfp);
    ChainMap left = cone_map(HomotopySquare{cube.f, cube.g, cube.a, cube.b, cube.H}, cf, cg);
    ChainMap right = cone_map(HomotopySquare{cube.fp, cube.gp, cube.ap, cube.bp, cube.Hp}, cfp, cgp);
    ChainMap bottom = cone_map(HomotopySquare{cube.g, cube.gp, cube.zeta, cube.omega, cube.G}, cg, cgp);

    const ComplexPtr& X = cube.f.src;
    const ComplexPtr& Y = cube.f.tgt;
    const ComplexPtr& Zp = cube.gp.src;
    const ComplexPtr& Wp = cube.gp.tgt;

    std::map<int, SpMat> psi;
    int lo = cf.cone->empty() ? 0 : cf.cone->min_degree();
    int hi = cf.cone->empty() ? -1 : cf.cone->max_degree();
    for (int j = lo; j <= hi; ++j) {
        SpMat m = SpMat::block2x2(-cube.A.at(j - 1), SpMat::zero(Zp->rank(j), Y->rank(j)),
                                  -cube.Phi.at(j - 1), cube.B.at(j));
        if (!m.is_zero()) psi[j] = std::move(m);
    }
    (void)X;
    (void)Wp;

    HomotopySquare out{top, bottom, left, right,
                       ChainHomotopy{compose(bottom, left), compose(right, top), std::move(psi)}};
    out.verify_or_throw("cube_fill_square: induced square");
    return out;
}

TruncationResult truncate_below(const BasedComplex& y, int n) {
    ComplexPtr Y = share(y);
    // Y^n
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, SpMat> diffs;
    SpMat ker = kernel_basis(y.diff(n));
    int lo = n, hi = y.empty() ? n : std::max(n, y.max_degree());
    for (int j = lo; j <= hi; ++j) {
        if (j == n) {
            ranks.push_back(ker.cols());
            std::vector<std::string> lab;
            for (int i = 0; i < ker.cols(); ++i)
                lab.push_back("k" + std::to_string(n) + "_" + std::to_string(i));
            labels.push_back(std::move(lab));
        } else {
            ranks.push_back(y.rank(j));
            labels.push_back(y.labels(j));
        }
        if (j == n + 1 && y.rank(n + 1) > 0 && ker.cols() > 0) {
            // express d_{n+1} in the kernel basis
            SmithDecomposition kd = smith_normal_form(ker);
            SpMat d = y.diff(n + 1);
            SpMat m(ker.cols(), d.cols());
            std::vector<Int> col(d.rows());
            for (int c = 0; c < d.cols(); ++c) {
                std::fill(col.begin(), col.end(), Int(0));
                for (const auto& [r, v] : d.column(c)) col[r] = v;
                auto sol = preimage_solve(kd, col);
                if (!sol) throw Error("truncate_below: image of d not inside kernel");
                for (int r = 0; r < ker.cols(); ++r) m.add_entry(r, c, (*sol)[r]);
            }
            if (!m.is_zero()) diffs[j] = std::move(m);
        } else if (j > n) {
            SpMat d = y.diff(j);
            if (!d.is_zero()) diffs[j] = std::move(d);
        }
    }
    ComplexPtr Yn = share(BasedComplex::make(lo, std::move(ranks), std::move(labels),
                                             std::move(diffs)));

    ChainMap incl{Yn, Y, {}};
    if (ker.cols() > 0) incl.set(n, ker);
    for (int j = n + 1; j <= hi; ++j)
        if (y.rank(j) > 0) incl.set(j, SpMat::identity(y.rank(j)));
    incl.verify_or_throw("truncate_below: inclusion");

    TruncationResult out;
    out.below = Yn;
    out.incl = incl;
    out.tau = *cone(incl).cone;
    return out;
}

}  // namespace zrc
