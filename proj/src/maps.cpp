#include "zrc/maps.hpp"

#include <algorithm>

namespace zrc {

namespace {

int lo_of(const ComplexPtr& a, const ComplexPtr& b) {
    int lo = 0;
    bool any = false;
    if (!a->empty()) lo = a->min_degree(), any = true;
    if (!b->empty()) lo = any ? std::min(lo, b->min_degree()) : b->min_degree(), any = true;
    return any ? lo : 0;
}

int hi_of(const ComplexPtr& a, const ComplexPtr& b) {
    int hi = -1;
    bool any = false;
    if (!a->empty()) hi = a->max_degree(), any = true;
    if (!b->empty()) hi = any ? std::max(hi, b->max_degree()) : b->max_degree(), any = true;
    return any ? hi : -1;
}

}  // namespace

SpMat ChainMap::at(int j) const {
    auto it = comp.find(j);
    if (it != comp.end()) return it->second;
    return SpMat::zero(tgt->rank(j), src->rank(j));
}

void ChainMap::set(int j, SpMat m) {
    if (m.rows() != tgt->rank(j) || m.cols() != src->rank(j))
        throw Error("ChainMap::set: shape mismatch at degree " + std::to_string(j));
    if (m.is_zero())
        comp.erase(j);
    else
        comp[j] = std::move(m);
}

ValidationReport ChainMap::verify() const {
    ValidationReport rep;
    for (const auto& [j, m] : comp)
        if (m.rows() != tgt->rank(j) || m.cols() != src->rank(j))
            rep.issues.push_back("chain map component at degree " + std::to_string(j) +
                                 " has wrong shape");
    if (!rep.ok()) return rep;
    int lo = lo_of(src, tgt), hi = hi_of(src, tgt);
    for (int j = lo; j <= hi; ++j) {
        if (tgt->diff(j) * at(j) != at(j - 1) * src->diff(j))
            rep.issues.push_back("chain map does not commute with d at degree " + std::to_string(j));
    }
    return rep;
}

void ChainMap::verify_or_throw(const std::string& what) const {
    ValidationReport rep = verify();
    if (!rep.ok()) throw Error(what + ": " + rep.joined());
}

Int ChainMap::max_norm_upto(int n) const {
    Int best(0);
    for (const auto& [j, m] : comp) {
        if (j > n) continue;
        Int v = m.l1_norm();
        if (v > best) best = v;
    }
    return best;
}

bool ChainMap::is_zero() const {
    for (const auto& [j, m] : comp)
        if (!m.is_zero()) return false;
    return true;
}

ChainMap ChainMap::zero(ComplexPtr src, ComplexPtr tgt) {
    return ChainMap{std::move(src), std::move(tgt), {}};
}

ChainMap ChainMap::identity(ComplexPtr x) {
    ChainMap f{x, x, {}};
    for (int j = x->min_degree(); !x->empty() && j <= x->max_degree(); ++j)
        if (x->rank(j) > 0) f.comp[j] = SpMat::identity(x->rank(j));
    return f;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
    if (!g.src->same_shape(*f.tgt)) throw Error("compose: chain mismatch");
    ChainMap out{f.src, g.tgt, {}};
    for (const auto& [j, m] : f.comp) {
        SpMat prod = g.at(j) * m;
        if (!prod.is_zero()) out.comp[j] = std::move(prod);
    }
    return out;
}

ChainMap map_sum(const ChainMap& f, const ChainMap& g, ComplexPtr src, ComplexPtr tgt) {
    ChainMap out{std::move(src), std::move(tgt), {}};
    int lo = lo_of(out.src, out.tgt), hi = hi_of(out.src, out.tgt);
    for (int j = lo; j <= hi; ++j) {
        SpMat m = SpMat::block_diag(f.at(j), g.at(j));
        if (!m.is_zero()) out.comp[j] = std::move(m);
    }
    return out;
}

ChainMap map_scale(const ChainMap& f, const Int& k) {
    ChainMap out{f.src, f.tgt, {}};
    if (sgn(k) == 0) return out;
    for (const auto& [j, m] : f.comp) out.comp[j] = m.scaled(k);
    return out;
}

ChainMap map_add(const ChainMap& f, const ChainMap& g) {
    ChainMap out{f.src, f.tgt, {}};
    int lo = lo_of(f.src, f.tgt), hi = hi_of(f.src, f.tgt);
    for (int j = lo; j <= hi; ++j) {
        SpMat m = f.at(j) + g.at(j);
        if (!m.is_zero()) out.comp[j] = std::move(m);
    }
    return out;
}

SpMat ChainHomotopy::at(int j) const {
    auto it = comp.find(j);
    if (it != comp.end()) return it->second;
    return SpMat::zero(tgt()->rank(j + 1), src()->rank(j));
}

void ChainHomotopy::set(int j, SpMat m) {
    if (m.rows() != tgt()->rank(j + 1) || m.cols() != src()->rank(j))
        throw Error("ChainHomotopy::set: shape mismatch at degree " + std::to_string(j));
    if (m.is_zero())
        comp.erase(j);
    else
        comp[j] = std::move(m);
}

ValidationReport ChainHomotopy::verify() const {
    ValidationReport rep;
    if (!from_map.src->same_shape(*to_map.src) || !from_map.tgt->same_shape(*to_map.tgt))
        rep.issues.push_back("homotopy endpoints live on different complexes");
    for (const auto& [j, m] : comp)
        if (m.rows() != tgt()->rank(j + 1) || m.cols() != src()->rank(j))
            rep.issues.push_back("homotopy component at degree " + std::to_string(j) +
                                 " has wrong shape");
    if (!rep.ok()) return rep;
    int lo = lo_of(src(), tgt()), hi = hi_of(src(), tgt());
    for (int j = lo; j <= hi; ++j) {
        SpMat lhs = tgt()->diff(j + 1) * at(j) + at(j - 1) * src()->diff(j);
        SpMat rhs = from_map.at(j) - to_map.at(j);
        if (lhs != rhs)
            rep.issues.push_back("homotopy identity fails at degree " + std::to_string(j));
    }
    return rep;
}

void ChainHomotopy::verify_or_throw(const std::string& what) const {
    ValidationReport rep = verify();
    if (!rep.ok()) throw Error(what + ": " + rep.joined());
}

Int ChainHomotopy::max_norm_upto(int n) const {
    Int best(0);
    for (const auto& [j, m] : comp) {
        if (j > n) continue;
        Int v = m.l1_norm();
        if (v > best) best = v;
    }
    return best;
}

ChainHomotopy ChainHomotopy::zero(const ChainMap& f) { return ChainHomotopy{f, f, {}}; }

ChainHomotopy homotopy_sum(const ChainHomotopy& a, const ChainHomotopy& b, const ChainMap& from,
                           const ChainMap& to) {
    ChainHomotopy out{from, to, {}};
    int lo = lo_of(from.src, from.tgt), hi = hi_of(from.src, from.tgt);
    for (int j = lo; j <= hi; ++j) {
        SpMat m = SpMat::block_diag(a.at(j), b.at(j));
        if (!m.is_zero()) out.comp[j] = std::move(m);
    }
    return out;
}

SpMat GradedMap::at(int j) const {
    auto it = comp.find(j);
    if (it != comp.end()) return it->second;
    return SpMat::zero(tgt->rank(j + degree), src->rank(j));
}

void GradedMap::set(int j, SpMat m) {
    if (m.rows() != tgt->rank(j + degree) || m.cols() != src->rank(j))
        throw Error("GradedMap::set: shape mismatch at degree " + std::to_string(j));
    if (m.is_zero())
        comp.erase(j);
    else
        comp[j] = std::move(m);
}

}  // namespace zrc
