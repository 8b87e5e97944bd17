#ifndef ZRC_CONE_HPP
#define ZRC_CONE_HPP

#include "zrc/maps.hpp"

namespace zrc {

/// Mapping cone of f : X -> Y.  Cone(f)_j = X_{j-1} (+) Y_j, X-part first;
/// d(x,y) = (-dX x, dY y + f x).  iota : Y -> Cone, pi : Cone -> Sigma X,
/// sigma is the degreewise section of iota (not a chain map in general).
struct ConeData {
    ChainMap f;
    ComplexPtr cone;
    ChainMap iota;
    ChainMap pi;
    GradedMap sigma;
};

ConeData cone(const ChainMap& f);

/// Homotopy commutative square: H : g a ~ b f.
struct HomotopySquare {
    ChainMap f, g, a, b;
    ChainHomotopy H;

    ValidationReport verify() const;
    void verify_or_throw(const std::string& what) const;
};

HomotopySquare make_square(ChainMap f, ChainMap g, ChainMap a, ChainMap b,
                           std::map<int, SpMat> h_comp, bool check = true);

// (a,b;H)_j(x,y) = (a x, b y - H x), from Cone(square.f) to Cone(square.g).
ChainMap cone_map(const HomotopySquare& square, const ConeData& cf, const ConeData& cg);
ChainMap cone_map(const HomotopySquare& square);

/// Homotopy commutative cube around inner square (f, g, a, b; H), outer
/// square (f', g', a', b'; H'), connecting maps xi, ups, zeta, omega and
/// coherence homotopies A, B, F, G with filler Phi : X_* -> W'_{*+2}.
struct HomotopyCube {
    ChainMap f, g, fp, gp;
    ChainMap a, b, ap, bp;
    ChainMap xi, ups, zeta, omega;
    ChainHomotopy H, Hp, A, B, F, G;
    GradedMap Phi;

    ValidationReport verify() const;
    void verify_or_throw(const std::string& what) const;
};

// Induced square of cone maps; the homotopy is
// Psi_j(x,y) = (-A x, B y - Phi x).
HomotopySquare cube_fill_square(const HomotopyCube& cube);

/// tau_{<n} Y = Cone(Y^n -> Y) where Y^n is Y in degrees >= n+1 and ker d_n
/// in degree n (Hermite-reduced kernel basis).
struct TruncationResult {
    BasedComplex tau;
    ComplexPtr below;  // Y^n
    ChainMap incl;
};

TruncationResult truncate_below(const BasedComplex& y, int n);

}  // namespace zrc

#endif
