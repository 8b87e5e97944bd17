#ifndef ZRC_REPLACEMENT_HPP
#define ZRC_REPLACEMENT_HPP

#include "zrc/htpy.hpp"

namespace zrc {

/// Finite free resolution of the degree-j chain module: an acyclic-in-
/// positive-degrees complex P (concentrated in degrees >= 0) together with
/// the augmentation eps : P_0 ->> X_j.
struct ModuleResolution {
    BasedComplex P;
    SpMat eps;
};

// Identity resolution of a free module: P = X_j in degree 0, eps = id.
ModuleResolution trivial_resolution(int rank, const std::vector<std::string>& labels);

struct ReplacementStage {
    int k = 0;
    ComplexPtr stage;        // Xhat^[k]
    ChainMap q;              // Xhat^[k] -> X^(k), verified weak equivalence
    ChainMap lifted;         // Sigma^{k-1} P^k -> Xhat^[k-1]  (k >= 1)
    ChainHomotopy lift_hom;  // q^{k-1} o lifted ~ d_k o Sigma^{k-1} eps^k
};

struct ProjectiveReplacement {
    ComplexPtr Xhat;
    ChainMap q;  // Xhat -> X
    std::vector<ReplacementStage> filtration;
};

// Iterated-cone replacement of X (concentrated in degrees >= 0) from free
// resolutions of its chain modules; q is verified to be a weak equivalence
// and H_*(Xhat) is compared with H_*(X) via Smith normal form.
ProjectiveReplacement projective_replacement(const BasedComplex& x,
                                             const std::vector<ModuleResolution>& resolutions);

}  // namespace zrc

#endif
