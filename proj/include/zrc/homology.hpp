#ifndef ZRC_HOMOLOGY_HPP
#define ZRC_HOMOLOGY_HPP

#include "zrc/complex.hpp"
#include "zrc/snf.hpp"

namespace zrc {

struct HomologyGroup {
    Int betti = 0;
    std::vector<Int> torsion_factors;  // invariant factors > 1
    double log_torsion = 0.0;          // natural log of their product

    bool operator==(const HomologyGroup& rhs) const {
        return betti == rhs.betti && torsion_factors == rhs.torsion_factors;
    }
};

/// Coefficient field: the rationals or F_p for a prime p.
struct FieldSpec {
    bool rationals = true;
    long p = 0;

    static FieldSpec Q() { return FieldSpec{true, 0}; }
    static FieldSpec Fp(long p);

    std::string name() const;
};

// Torsion of H_j is read off the cokernel of d_{j+1} inside X_j; this agrees
// with tors H_j because X_j / ker d_j is free.
HomologyGroup integer_homology(const BasedComplex& x, int j);

Int field_betti(const BasedComplex& x, int j, const FieldSpec& field);

struct GabberResult {
    double log_torsion = 0.0;
    double bound = 0.0;
    bool holds = false;
};

// log tors H_j(X) <= rk(X_j) * log_+ ||d_{j+1}||.
GabberResult gabber_check(const BasedComplex& x, int j);

// Equal betti and torsion in every degree.
bool homology_equal(const BasedComplex& x, const BasedComplex& y);

bool is_acyclic(const BasedComplex& x);

}  // namespace zrc

#endif
