#ifndef ZRC_FOLNER_HPP
#define ZRC_FOLNER_HPP

#include "zrc/equivariant.hpp"

namespace zrc {

/// F = [0,d)^n, a transversal of (dZ)^n in Z^n.
struct FolnerBox {
    int n = 1;
    long d = 1;

    long size() const;
    bool contains(const GroupElt& e) const;
};

FolnerBox folner_box(int n, long d);

/// Interior of the box with respect to the word ball of the given radius:
/// gamma is interior iff gamma * w stays in the box for every word w of
/// length <= radius over S.
struct InteriorData {
    int radius = 0;
    std::vector<char> in_interior;  // by coset index
    long count = 0;

    long boundary_count() const { return static_cast<long>(in_interior.size()) - count; }
};

InteriorData interior(const FolnerBox& box, int radius, const std::vector<GroupElt>& gens);

/// Based subcomplex of the coinvariants spanned, in degree j, by the basis
/// elements whose coset lies in the interior at radius j+1.
struct InteriorSubcomplex {
    BasedInclusion incl;                  // A -> X_Lambda
    std::vector<InteriorData> interiors;  // per degree 0..n_max
};

InteriorSubcomplex interior_subcomplex(const EquivariantComplex& x, long d,
                                       std::vector<GroupElt> gens = {});

/// Contraction data of the augmented Koszul complex over Z^n, evaluated
/// lazily element by element: the rank-1 discrete integral in the lowest
/// free coordinate, with earlier coordinates collapsed by the augmentation.
class KoszulContraction {
public:
    explicit KoszulContraction(int n);

    // Sparse element: (exterior-basis bitmask, group element) -> coefficient.
    using Elem = std::map<std::pair<unsigned, GroupElt>, Int>;

    // s applied to a single degree-j basis vector; result lives in degree j+1.
    Elem contract_single(unsigned mask, const GroupElt& a) const;

    int degree_of(unsigned mask) const;
    int basis_index(unsigned mask) const;  // position within its degree
    unsigned mask_of(int degree, int index) const;

private:
    int n_;
    std::vector<std::vector<unsigned>> masks_;  // per degree, ascending
    std::vector<int> index_of_;                 // mask -> index within degree
};

// Nullhomotopy of the augmented inclusion A^eps -> (X_Lambda)^eps obtained by
// factoring through the lazy Koszul contraction and the coinvariant
// projection.  Components are indexed by degree, including -1.
std::map<int, SpMat> koszul_nullhomotopy(const EquivariantComplex& koszul, long d,
                                         const InteriorSubcomplex& sub);

struct AmenableRebuildReport {
    int group_rank = 1;
    long d = 1;
    int n = 1;
    Rat T_prime;
    double kappa = 1.0;
    std::vector<double> boundary_fraction;  // per degree 0..n
    std::vector<int> rank_X, rank_A, rank_Yplus;
    CertifiedRebuilding cert;
};

// Full pipeline for Z^n at one residual-chain level: interior subcomplex,
// factored nullhomotopy, augmented retract, quality (T, kappa) with
// kappa = max{1, max_j log_+ ||d^{X_Lambda}_j||}.  Fails when T > T'.
AmenableRebuildReport amenable_weak_rebuilding(int group_rank, long d, const Rat& T);

}  // namespace zrc

#endif
