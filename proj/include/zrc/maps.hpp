#ifndef ZRC_MAPS_HPP
#define ZRC_MAPS_HPP

#include <map>

#include "zrc/complex.hpp"

namespace zrc {

/// Degree-0 family of matrices f_j : X_j -> Y_j with dY f = f dX.
struct ChainMap {
    ComplexPtr src, tgt;
    std::map<int, SpMat> comp;  // absent degrees are zero

    SpMat at(int j) const;
    void set(int j, SpMat m);

    ValidationReport verify() const;
    void verify_or_throw(const std::string& what) const;

    Int l1_norm(int j) const { return at(j).l1_norm(); }
    Int max_norm_upto(int n) const;

    bool is_zero() const;

    static ChainMap zero(ComplexPtr src, ComplexPtr tgt);
    static ChainMap identity(ComplexPtr x);
};

// g o f
ChainMap compose(const ChainMap& g, const ChainMap& f);
ChainMap map_sum(const ChainMap& f, const ChainMap& g, ComplexPtr src, ComplexPtr tgt);
ChainMap map_scale(const ChainMap& f, const Int& k);
ChainMap map_add(const ChainMap& f, const ChainMap& g);

/// Degree-(+1) family H_j : X_j -> Y_{j+1} with dH + Hd = from - to.
struct ChainHomotopy {
    ChainMap from_map, to_map;
    std::map<int, SpMat> comp;

    ComplexPtr src() const { return from_map.src; }
    ComplexPtr tgt() const { return from_map.tgt; }

    SpMat at(int j) const;
    void set(int j, SpMat m);

    ValidationReport verify() const;
    void verify_or_throw(const std::string& what) const;

    Int l1_norm(int j) const { return at(j).l1_norm(); }
    Int max_norm_upto(int n) const;

    static ChainHomotopy zero(const ChainMap& f);  // H : f ~ f
};

ChainHomotopy homotopy_sum(const ChainHomotopy& a, const ChainHomotopy& b, const ChainMap& from,
                           const ChainMap& to);

/// Arbitrary degree-d family of matrices between two complexes; no identity
/// is imposed (used for sections and cube fillers).
struct GradedMap {
    ComplexPtr src, tgt;
    int degree = 0;
    std::map<int, SpMat> comp;

    SpMat at(int j) const;
    void set(int j, SpMat m);
};

}  // namespace zrc

#endif
