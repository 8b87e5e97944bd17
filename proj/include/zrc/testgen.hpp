#ifndef ZRC_TESTGEN_HPP
#define ZRC_TESTGEN_HPP

#include <random>

#include "zrc/rebuild.hpp"

namespace zrc {

/// Generators for the randomized identity and property suites.
struct TestGen {
    std::mt19937 rng;

    explicit TestGen(unsigned seed) : rng(seed) {}

    int uniform(int lo, int hi);

    // Random bounded based complex with dd = 0: differentials are drawn
    // columnwise from the integer kernel of the previous differential, with
    // entries clamped to [-max_entry, max_entry] by rejection.
    BasedComplex random_complex(int max_rank, int max_degrees, int max_entry);

    // Random graded degree-shift map between two complexes (no identity
    // imposed).
    std::map<int, SpMat> random_graded(const BasedComplex& src, const BasedComplex& tgt, int shift,
                                       int max_entry);

    // Nullhomotopic chain map d h + h d from a random graded h, plus
    // c * id when source and target coincide.
    ChainMap random_chain_map(ComplexPtr src, ComplexPtr tgt, int max_entry);
    ChainMap random_self_map(ComplexPtr x, int max_entry);

    // Retract of x onto x (+) cone(id_a) for a random complex a, with the
    // canonical projection/inclusion and zero homotopy.
    HomotopyRetract random_padded_retract(ComplexPtr x, int max_rank, int max_entry);
};

}  // namespace zrc

#endif
