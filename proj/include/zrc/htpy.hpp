#ifndef ZRC_HTPY_HPP
#define ZRC_HTPY_HPP

#include <optional>

#include "zrc/cone.hpp"
#include "zrc/homology.hpp"

namespace zrc {

/// (X, X', xi, xi', Xi) with Xi : id_X ~ xi' o xi.  Constructed only when
/// every identity holds exactly.
struct HomotopyRetract {
    ComplexPtr X, Xp;
    ChainMap xi, xi_p;
    ChainHomotopy Xi;
};

HomotopyRetract verify_retract(ComplexPtr x, ComplexPtr xp, ChainMap xi, ChainMap xi_p,
                               std::map<int, SpMat> Xi_comp);
HomotopyRetract identity_retract(ComplexPtr x);

/// s_j : X_j -> X_{j+1} with d s + s d = id in every degree.
struct Contraction {
    ComplexPtr X;
    std::map<int, SpMat> s;

    SpMat at(int j) const;
    void verify_or_throw() const;
};

// X must be bounded, free and acyclic; built degree-by-degree from the bottom
// via columnwise integer preimage solves.
Contraction contract_acyclic(const BasedComplex& x);

struct HomotopyInverse {
    ChainMap r;           // homotopy inverse of q
    ChainHomotopy h_src;  // id_src ~ r o q
    ChainHomotopy h_tgt;  // id_tgt ~ q o r
};

// q must be a weak equivalence of bounded free complexes (checked via
// acyclicity of its cone).  r and the homotopies are read off the blocks of
// a contraction of Cone(q).
HomotopyInverse homotopy_inverse(const ChainMap& q);

/// X with a copy of Z appended in degree -1 and the standard augmentation as
/// the degree-0 differential.
struct AugmentedComplex {
    ComplexPtr base;
    ComplexPtr eps_complex;  // X^eps
    SpMat eps;               // 1 x rank(X_0)
};

AugmentedComplex augment(const BasedComplex& x);

// Y^+: an extra Z summand in degree 0, differentials unchanged.
BasedComplex plus_construction(const BasedComplex& y);

/// Basis-preserving inclusion A -> X, stored as per-degree index lists into
/// the basis of X.
struct BasedInclusion {
    ComplexPtr X, A;
    std::map<int, std::vector<int>> pos;

    ChainMap incl_map() const;
};

// Builds the inclusion from the positions; checks A is a based subcomplex.
BasedInclusion based_inclusion(ComplexPtr x, ComplexPtr a, std::map<int, std::vector<int>> pos);
// Positions found by matching labels.
BasedInclusion based_inclusion_by_labels(ComplexPtr x, ComplexPtr a);

struct QuotientResult {
    ComplexPtr Y;  // X / A
    ChainMap proj;
};

QuotientResult quotient_complex(const BasedInclusion& incl);

struct AugmentedRetractResult {
    ComplexPtr Y;      // X / A
    ComplexPtr Yplus;  // (X/A)^+
    ChainMap gplus;    // X -> Y^+
    ChainMap hplus;    // Y^+ -> X
    ChainHomotopy Hom; // id_X ~ hplus o gplus
    HomotopyRetract retract;
};

// Lemma-style retract of X onto (X/A)^+ from an augmentedly nullhomotopic
// based inclusion.  H_null : f^eps ~ 0 is supplied, or computed from a
// contraction of X^eps when absent.
AugmentedRetractResult augmented_retract(const BasedInclusion& incl,
                                         std::optional<std::map<int, SpMat>> H_null_comp);

struct QuotientQuality {
    Rat T_prime;     // min over degrees <= n of rk X_j / rk Y+_j
    double kappa;    // max{1, max log_+ ||d^X_j||}
    bool kappa_is_one;
};

QuotientQuality quality_from_quotient(const BasedComplex& x, const BasedComplex& yplus, int n);

}  // namespace zrc

#endif
