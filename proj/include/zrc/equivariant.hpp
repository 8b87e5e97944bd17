#ifndef ZRC_EQUIVARIANT_HPP
#define ZRC_EQUIVARIANT_HPP

#include <set>

#include "zrc/rebuild.hpp"

namespace zrc {

/// Supported groups: Z^n (free abelian) and Z/m (finite cyclic).
struct GroupSpec {
    enum class Kind { free_abelian, finite_cyclic };
    Kind kind = Kind::free_abelian;
    int n = 1;   // rank, free abelian case
    long m = 1;  // order, finite cyclic case

    static GroupSpec free_abelian(int n);
    static GroupSpec finite_cyclic(long m);

    int elt_size() const { return kind == Kind::free_abelian ? n : 1; }
    std::string name() const;

    bool operator==(const GroupSpec& o) const {
        return kind == o.kind && n == o.n && m == o.m;
    }
};

// Elements: integer vectors of length n, or single residues in [0, m).
using GroupElt = std::vector<long>;

GroupElt group_id(const GroupSpec& g);
GroupElt group_mul(const GroupSpec& g, const GroupElt& a, const GroupElt& b);
GroupElt group_inv(const GroupSpec& g, const GroupElt& a);
// Standard generators and their inverses.
std::vector<GroupElt> standard_generators(const GroupSpec& g);

/// Finite formal Z-linear combination of group elements.
struct GroupRingElt {
    std::map<GroupElt, Int> terms;

    bool is_zero() const { return terms.empty(); }
    Int norm() const;  // sum of |coefficients|
    GroupRingElt operator-() const;
    bool operator==(const GroupRingElt& o) const { return terms == o.terms; }

    static GroupRingElt unit(const GroupElt& e, Int coeff = Int(1));
};

GroupRingElt gre_add(const GroupRingElt& a, const GroupRingElt& b);
GroupRingElt gre_mul(const GroupSpec& g, const GroupRingElt& a, const GroupRingElt& b);

/// Matrix over the group ring, sparse; rows index the target basis, columns
/// the source basis (same convention as SpMat).
struct GRMat {
    int rows = 0, cols = 0;
    std::map<std::pair<int, int>, GroupRingElt> ent;

    static GRMat identity(const GroupSpec& g, int n);

    void add_term(int r, int c, const GroupElt& e, const Int& coeff);
    const GroupRingElt* entry(int r, int c) const;

    bool is_zero() const;
    Int norm() const;  // max column sum of entry norms
    GRMat operator-() const;
    bool operator==(const GRMat& o) const { return rows == o.rows && cols == o.cols && ent == o.ent; }

    std::set<GroupElt> support() const;
};

GRMat gr_mul(const GroupSpec& g, const GRMat& a, const GRMat& b);
GRMat gr_add(const GRMat& a, const GRMat& b);
GRMat gr_block2x2(const GRMat& a, const GRMat& b, const GRMat& c, const GRMat& d);

/// Chain complex of finitely generated free modules over the group ring.
struct EquivariantComplex {
    GroupSpec G;
    int lo = 0;
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels_;
    std::map<int, GRMat> diffs;

    bool empty() const { return ranks.empty(); }
    int min_degree() const { return lo; }
    int max_degree() const { return lo + static_cast<int>(ranks.size()) - 1; }
    int rank(int j) const;
    const std::vector<std::string>& labels(int j) const;
    GRMat diff(int j) const;

    ValidationReport validate() const;  // formal dd = 0 over the group ring
};

using EqComplexPtr = std::shared_ptr<const EquivariantComplex>;

EqComplexPtr eq_share(EquivariantComplex x);

EquivariantComplex make_equivariant(GroupSpec g, int lo, std::vector<int> ranks,
                                    std::vector<std::vector<std::string>> labels,
                                    std::map<int, GRMat> diffs, bool check = true);

struct EqChainMap {
    EqComplexPtr src, tgt;
    std::map<int, GRMat> comp;

    GRMat at(int j) const;
    void set(int j, GRMat m);
    void verify_or_throw(const std::string& what) const;
    Int max_norm_upto(int n) const;
};

EquivariantComplex eq_cone(const EqChainMap& f);

/// Equivariant homotopy retract with formal identities over the group ring.
struct EqRetract {
    EqComplexPtr X, Xp;
    EqChainMap xi, xi_p;
    std::map<int, GRMat> Xi;
};

EqRetract verify_eq_retract(EqComplexPtr x, EqComplexPtr xp, EqChainMap xi, EqChainMap xi_p,
                            std::map<int, GRMat> Xi);

// Koszul resolution of the trivial module: for Z^n ranks C(n,j) with
// d(e_I) = sum_k (-1)^{k+1} (t_{i_k} - 1) e_{I \ i_k}; for Z/m the 2-periodic
// resolution with differentials t-1 and the norm element, truncated at
// top_degree.
EquivariantComplex koszul_resolution(const GroupSpec& g, int top_degree = -1);

/// Residual chain: for Z^n a list of moduli 1 = m_0 | m_1 | ... strictly
/// increasing past index 0 (level i is (m_i Z)^n); for Z/m a divisor chain
/// 1 = d_0 | d_1 | ... | d_last = m (level i is the subgroup generated by
/// d_i, of index d_i).
struct ResidualChain {
    GroupSpec G;
    std::vector<long> levels;

    void validate_or_throw() const;
    size_t size() const { return levels.size(); }
    Int index(size_t i) const;
};

ResidualChain make_chain(GroupSpec g, std::vector<long> levels);
ResidualChain pow2_chain(GroupSpec g, int count);

// Number of cosets of the level subgroup and the coset index of a group
// element (mixed-radix tuples, first coordinate major).
long coset_count(const GroupSpec& g, long level);
long coset_index(const GroupSpec& g, long level, const GroupElt& e);
GroupElt coset_rep(const GroupSpec& g, long level, long index);
std::string coset_label(const GroupSpec& g, long level, long index);

BasedComplex coinvariants(const EquivariantComplex& x, long level);
SpMat coinvariant_matrix(const GroupSpec& g, const GRMat& m, long level);
ChainMap coinvariants_map(const EqChainMap& f, long level);
ChainMap coinvariants_map(const EqChainMap& f, long level, ComplexPtr src, ComplexPtr tgt);

struct CoinvariantNormCheck {
    Int coinvariant_norm;
    Int group_ring_norm;
    bool holds;
};

CoinvariantNormCheck coinvariant_norm_check(const GroupSpec& g, const GRMat& m, long level);

/// Embedding of a supported subgroup: Z^k as the first k coordinates of Z^n,
/// or Z/(m/d) as the index-d subgroup of Z/m.
struct SubgroupEmbedding {
    GroupSpec sub, amb;

    GroupElt embed(const GroupElt& e) const;
};

SubgroupEmbedding subgroup_embedding(GroupSpec sub, GroupSpec amb);

EquivariantComplex induce(const EquivariantComplex& x, const SubgroupEmbedding& emb);

/// (ind_sub^amb X)_Lambda decomposed as multiplicity copies of X_{Lambda ^ sub}:
/// perm[j] maps the block-sum basis (copies major) to the coinvariant basis.
struct InducedDecomposition {
    long multiplicity = 1;
    BasedComplex inner;        // X_{Lambda ^ sub}
    BasedComplex block_sum;    // multiplicity copies of inner
    BasedComplex coinv;        // (ind X)_Lambda
    ChainMap iso;              // block_sum -> coinv, a permutation in each degree
    ChainMap iso_inv;
};

InducedDecomposition decompose_induced_coinvariants(const EquivariantComplex& x,
                                                    const SubgroupEmbedding& emb, long level);

// Certify the coinvariant retract of a group-ring-level retract whose ledger
// (ranks and group-ring norms per kind) holds at quality (T, kappa).
CertifiedRebuilding descend_retract(const EqRetract& r, long level, int n, const Quality& q,
                                    RebuildKind kind);

}  // namespace zrc

#endif
