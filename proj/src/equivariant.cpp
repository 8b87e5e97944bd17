#include "zrc/equivariant.hpp"

#include <algorithm>
#include <sstream>

namespace zrc {

GroupSpec GroupSpec::free_abelian(int n) {
    if (n < 1) throw Error("GroupSpec: rank must be >= 1");
    GroupSpec g;
    g.kind = Kind::free_abelian;
    g.n = n;
    return g;
}

GroupSpec GroupSpec::finite_cyclic(long m) {
    if (m < 1) throw Error("GroupSpec: order must be >= 1");
    GroupSpec g;
    g.kind = Kind::finite_cyclic;
    g.m = m;
    g.n = 1;
    return g;
}

std::string GroupSpec::name() const {
    if (kind == Kind::free_abelian) return "Z^" + std::to_string(n);
    return "Z/" + std::to_string(m);
}

GroupElt group_id(const GroupSpec& g) { return GroupElt(g.elt_size(), 0); }

GroupElt group_mul(const GroupSpec& g, const GroupElt& a, const GroupElt& b) {
    GroupElt out(g.elt_size());
    for (int i = 0; i < g.elt_size(); ++i) out[i] = a[i] + b[i];
    if (g.kind == GroupSpec::Kind::finite_cyclic) out[0] = ((out[0] % g.m) + g.m) % g.m;
    return out;
}

GroupElt group_inv(const GroupSpec& g, const GroupElt& a) {
    GroupElt out(g.elt_size());
    for (int i = 0; i < g.elt_size(); ++i) out[i] = -a[i];
    if (g.kind == GroupSpec::Kind::finite_cyclic) out[0] = ((out[0] % g.m) + g.m) % g.m;
    return out;
}

std::vector<GroupElt> standard_generators(const GroupSpec& g) {
    std::vector<GroupElt> out;
    if (g.kind == GroupSpec::Kind::free_abelian) {
        for (int i = 0; i < g.n; ++i) {
            GroupElt e(g.n, 0);
            e[i] = 1;
            out.push_back(e);
            e[i] = -1;
            out.push_back(e);
        }
    } else {
        if (g.m > 1) {
            out.push_back({1 % g.m});
            out.push_back({(g.m - 1) % g.m});
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Int GroupRingElt::norm() const {
    Int s(0);
    for (const auto& [e, c] : terms) s += abs(c);
    return s;
}

GroupRingElt GroupRingElt::operator-() const {
    GroupRingElt out;
    for (const auto& [e, c] : terms) out.terms[e] = -c;
    return out;
}

GroupRingElt GroupRingElt::unit(const GroupElt& e, Int coeff) {
    GroupRingElt out;
    if (sgn(coeff) != 0) out.terms[e] = std::move(coeff);
    return out;
}

GroupRingElt gre_add(const GroupRingElt& a, const GroupRingElt& b) {
    GroupRingElt out = a;
    for (const auto& [e, c] : b.terms) {
        auto it = out.terms.find(e);
        if (it == out.terms.end()) {
            out.terms[e] = c;
        } else {
            it->second += c;
            if (sgn(it->second) == 0) out.terms.erase(it);
        }
    }
    return out;
}

GroupRingElt gre_mul(const GroupSpec& g, const GroupRingElt& a, const GroupRingElt& b) {
    GroupRingElt out;
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            GroupElt e = group_mul(g, ea, eb);
            auto it = out.terms.find(e);
            if (it == out.terms.end()) {
                Int v = ca * cb;
                if (sgn(v) != 0) out.terms[e] = std::move(v);
            } else {
                it->second += ca * cb;
                if (sgn(it->second) == 0) out.terms.erase(it);
            }
        }
    return out;
}

GRMat GRMat::identity(const GroupSpec& g, int n) {
    GRMat out;
    out.rows = out.cols = n;
    for (int i = 0; i < n; ++i) out.ent[{i, i}] = GroupRingElt::unit(group_id(g));
    return out;
}

void GRMat::add_term(int r, int c, const GroupElt& e, const Int& coeff) {
    if (r < 0 || r >= rows || c < 0 || c >= cols) throw Error("GRMat: index out of range");
    if (sgn(coeff) == 0) return;
    GroupRingElt& x = ent[{r, c}];
    auto it = x.terms.find(e);
    if (it == x.terms.end()) {
        x.terms[e] = coeff;
    } else {
        it->second += coeff;
        if (sgn(it->second) == 0) x.terms.erase(it);
    }
    if (x.is_zero()) ent.erase({r, c});
}

const GroupRingElt* GRMat::entry(int r, int c) const {
    auto it = ent.find({r, c});
    return it == ent.end() ? nullptr : &it->second;
}

bool GRMat::is_zero() const { return ent.empty(); }

Int GRMat::norm() const {
    std::map<int, Int> colsum;
    for (const auto& [rc, e] : ent) colsum[rc.second] += e.norm();
    Int best(0);
    for (const auto& [c, s] : colsum)
        if (s > best) best = s;
    return best;
}

GRMat GRMat::operator-() const {
    GRMat out;
    out.rows = rows;
    out.cols = cols;
    for (const auto& [rc, e] : ent) out.ent[rc] = -e;
    return out;
}

std::set<GroupElt> GRMat::support() const {
    std::set<GroupElt> out;
    for (const auto& [rc, e] : ent)
        for (const auto& [el, c] : e.terms) out.insert(el);
    return out;
}

GRMat gr_mul(const GroupSpec& g, const GRMat& a, const GRMat& b) {
    if (a.cols != b.rows) throw Error("gr_mul: dimension mismatch");
    GRMat out;
    out.rows = a.rows;
    out.cols = b.cols;
    for (const auto& [rcb, eb] : b.ent) {
        int k = rcb.first, c = rcb.second;
        for (const auto& [rca, ea] : a.ent) {
            if (rca.second != k) continue;
            GroupRingElt prod = gre_mul(g, ea, eb);
            if (prod.is_zero()) continue;
            auto& cell = out.ent[{rca.first, c}];
            cell = gre_add(cell, prod);
            if (cell.is_zero()) out.ent.erase({rca.first, c});
        }
    }
    return out;
}

GRMat gr_add(const GRMat& a, const GRMat& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw Error("gr_add: dimension mismatch");
    GRMat out = a;
    for (const auto& [rc, e] : b.ent) {
        auto& cell = out.ent[rc];
        cell = gre_add(cell, e);
        if (cell.is_zero()) out.ent.erase(rc);
    }
    return out;
}

GRMat gr_block2x2(const GRMat& a, const GRMat& b, const GRMat& c, const GRMat& d) {
    if (a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols)
        throw Error("gr_block2x2: dimension mismatch");
    GRMat out;
    out.rows = a.rows + c.rows;
    out.cols = a.cols + b.cols;
    for (const auto& [rc, e] : a.ent) out.ent[rc] = e;
    for (const auto& [rc, e] : b.ent) out.ent[{rc.first, rc.second + a.cols}] = e;
    for (const auto& [rc, e] : c.ent) out.ent[{rc.first + a.rows, rc.second}] = e;
    for (const auto& [rc, e] : d.ent) out.ent[{rc.first + a.rows, rc.second + a.cols}] = e;
    return out;
}

int EquivariantComplex::rank(int j) const {
    if (empty() || j < lo || j > max_degree()) return 0;
    return ranks[j - lo];
}

const std::vector<std::string>& EquivariantComplex::labels(int j) const {
    static const std::vector<std::string> none;
    if (empty() || j < lo || j > max_degree()) return none;
    return labels_[j - lo];
}

GRMat EquivariantComplex::diff(int j) const {
    auto it = diffs.find(j);
    if (it != diffs.end()) return it->second;
    GRMat z;
    z.rows = rank(j - 1);
    z.cols = rank(j);
    return z;
}

ValidationReport EquivariantComplex::validate() const {
    ValidationReport rep;
    for (const auto& [j, d] : diffs)
        if (d.rows != rank(j - 1) || d.cols != rank(j))
            rep.issues.push_back("equivariant differential at degree " + std::to_string(j) +
                                 " has wrong shape");
    if (!rep.ok()) return rep;
    for (int j = lo + 2; !empty() && j <= max_degree(); ++j)
        if (!gr_mul(G, diff(j - 1), diff(j)).is_zero())
            rep.issues.push_back("dd != 0 over the group ring at degree " + std::to_string(j));
    return rep;
}

EqComplexPtr eq_share(EquivariantComplex x) {
    return std::make_shared<const EquivariantComplex>(std::move(x));
}

EquivariantComplex make_equivariant(GroupSpec g, int lo, std::vector<int> ranks,
                                    std::vector<std::vector<std::string>> labels,
                                    std::map<int, GRMat> diffs, bool check) {
    EquivariantComplex x;
    x.G = g;
    x.lo = lo;
    x.ranks = std::move(ranks);
    x.labels_ = std::move(labels);
    x.diffs = std::move(diffs);
    if (x.labels_.size() != x.ranks.size())
        throw Error("make_equivariant: ranks/labels length mismatch");
    if (check) {
        ValidationReport rep = x.validate();
        if (!rep.ok()) throw Error("invalid equivariant complex: " + rep.joined());
    }
    return x;
}

GRMat EqChainMap::at(int j) const {
    auto it = comp.find(j);
    if (it != comp.end()) return it->second;
    GRMat z;
    z.rows = tgt->rank(j);
    z.cols = src->rank(j);
    return z;
}

void EqChainMap::set(int j, GRMat m) {
    if (m.rows != tgt->rank(j) || m.cols != src->rank(j))
        throw Error("EqChainMap::set: shape mismatch at degree " + std::to_string(j));
    if (m.is_zero())
        comp.erase(j);
    else
        comp[j] = std::move(m);
}

void EqChainMap::verify_or_throw(const std::string& what) const {
    if (!(src->G == tgt->G)) throw Error(what + ": groups differ");
    int lo = std::min(src->empty() ? 0 : src->min_degree(), tgt->empty() ? 0 : tgt->min_degree());
    int hi = std::max(src->empty() ? -1 : src->max_degree(), tgt->empty() ? -1 : tgt->max_degree());
    for (int j = lo; j <= hi; ++j) {
        GRMat lhs = gr_mul(src->G, tgt->diff(j), at(j));
        GRMat rhs = gr_mul(src->G, at(j - 1), src->diff(j));
        if (!(lhs == rhs))
            throw Error(what + ": does not commute with d at degree " + std::to_string(j));
    }
}

Int EqChainMap::max_norm_upto(int n) const {
    Int best(0);
    for (const auto& [j, m] : comp) {
        if (j > n) continue;
        Int v = m.norm();
        if (v > best) best = v;
    }
    return best;
}

EquivariantComplex eq_cone(const EqChainMap& f) {
    f.verify_or_throw("eq_cone: input");
    const EquivariantComplex& X = *f.src;
    const EquivariantComplex& Y = *f.tgt;
    int lo = std::min(X.empty() ? INT32_MAX : X.min_degree() + 1,
                      Y.empty() ? INT32_MAX : Y.min_degree());
    int hi = std::max(X.empty() ? INT32_MIN : X.max_degree() + 1,
                      Y.empty() ? INT32_MIN : Y.max_degree());
    if (lo > hi) return make_equivariant(X.G, 0, {}, {}, {});
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, GRMat> diffs;
    for (int j = lo; j <= hi; ++j) {
        ranks.push_back(X.rank(j - 1) + Y.rank(j));
        std::vector<std::string> lab;
        for (const auto& l : X.labels(j - 1)) lab.push_back("cx:" + l);
        for (const auto& l : Y.labels(j)) lab.push_back("cy:" + l);
        labels.push_back(std::move(lab));
        if (j > lo) {
            GRMat zero;
            zero.rows = X.rank(j - 2);
            zero.cols = Y.rank(j);
            GRMat d = gr_block2x2(-X.diff(j - 1), zero, f.at(j - 1), Y.diff(j));
            if (!d.is_zero()) diffs[j] = std::move(d);
        }
    }
    return make_equivariant(X.G, lo, std::move(ranks), std::move(labels), std::move(diffs));
}

EqRetract verify_eq_retract(EqComplexPtr x, EqComplexPtr xp, EqChainMap xi, EqChainMap xi_p,
                            std::map<int, GRMat> Xi) {
    xi.verify_or_throw("verify_eq_retract: xi");
    xi_p.verify_or_throw("verify_eq_retract: xi'");
    const GroupSpec& g = x->G;
    int lo = x->empty() ? 0 : x->min_degree();
    int hi = x->empty() ? -1 : x->max_degree();
    for (int j = lo; j <= hi; ++j) {
        GRMat h;
        auto it = Xi.find(j);
        if (it != Xi.end()) {
            h = it->second;
        } else {
            h.rows = x->rank(j + 1);
            h.cols = x->rank(j);
        }
        GRMat hprev;
        auto it2 = Xi.find(j - 1);
        if (it2 != Xi.end()) {
            hprev = it2->second;
        } else {
            hprev.rows = x->rank(j);
            hprev.cols = x->rank(j - 1);
        }
        GRMat lhs = gr_add(gr_mul(g, x->diff(j + 1), h), gr_mul(g, hprev, x->diff(j)));
        GRMat rhs = gr_add(GRMat::identity(g, x->rank(j)),
                           -gr_mul(g, xi_p.at(j), xi.at(j)));
        if (!(lhs == rhs))
            throw Error("verify_eq_retract: homotopy identity fails at degree " +
                        std::to_string(j));
    }
    return EqRetract{std::move(x), std::move(xp), std::move(xi), std::move(xi_p), std::move(Xi)};
}

namespace {

std::vector<std::vector<int>> subsets_of_size(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

std::string subset_label(const std::vector<int>& s) {
    std::ostringstream os;
    os << "e(";
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) os << ",";
        os << s[i] + 1;
    }
    os << ")";
    return os.str();
}

}  // namespace

EquivariantComplex koszul_resolution(const GroupSpec& g, int top_degree) {
    if (g.kind == GroupSpec::Kind::free_abelian) {
        int n = g.n;
        std::vector<int> ranks;
        std::vector<std::vector<std::string>> labels;
        std::vector<std::vector<std::vector<int>>> bases;
        for (int j = 0; j <= n; ++j) {
            bases.push_back(subsets_of_size(n, j));
            ranks.push_back(static_cast<int>(bases[j].size()));
            std::vector<std::string> lab;
            for (const auto& s : bases[j]) lab.push_back(subset_label(s));
            labels.push_back(std::move(lab));
        }
        std::map<int, GRMat> diffs;
        for (int j = 1; j <= n; ++j) {
            GRMat d;
            d.rows = ranks[j - 1];
            d.cols = ranks[j];
            for (int c = 0; c < ranks[j]; ++c) {
                const std::vector<int>& I = bases[j][c];
                for (int k = 0; k < j; ++k) {
                    std::vector<int> J = I;
                    J.erase(J.begin() + k);
                    int r = static_cast<int>(std::lower_bound(bases[j - 1].begin(),
                                                              bases[j - 1].end(), J) -
                                             bases[j - 1].begin());
                    Int sign((k % 2 == 0) ? 1 : -1);
                    GroupElt t(g.n, 0);
                    t[I[k]] = 1;
                    d.add_term(r, c, t, sign);
                    d.add_term(r, c, group_id(g), -sign);
                }
            }
            diffs[j] = std::move(d);
        }
        return make_equivariant(g, 0, std::move(ranks), std::move(labels), std::move(diffs));
    }

    // finite cyclic: 2-periodic, truncated
    if (top_degree < 0) throw Error("koszul_resolution: finite cyclic case needs a top degree");
    std::vector<int> ranks(top_degree + 1, 1);
    std::vector<std::vector<std::string>> labels;
    for (int j = 0; j <= top_degree; ++j) labels.push_back({"g" + std::to_string(j)});
    std::map<int, GRMat> diffs;
    for (int j = 1; j <= top_degree; ++j) {
        GRMat d;
        d.rows = d.cols = 1;
        if (j % 2 == 1) {
            d.add_term(0, 0, {1 % g.m}, Int(1));
            d.add_term(0, 0, {0}, Int(-1));
        } else {
            for (long r = 0; r < g.m; ++r) d.add_term(0, 0, {r}, Int(1));
        }
        if (!d.is_zero()) diffs[j] = std::move(d);
    }
    return make_equivariant(g, 0, std::move(ranks), std::move(labels), std::move(diffs));
}

void ResidualChain::validate_or_throw() const {
    if (levels.empty()) throw Error("ResidualChain: empty");
    if (levels[0] != 1) throw Error("ResidualChain: first level must be the full group");
    for (size_t i = 0; i + 1 < levels.size(); ++i) {
        if (levels[i + 1] % levels[i] != 0)
            throw Error("ResidualChain: levels must form a divisibility chain");
        if (G.kind == GroupSpec::Kind::free_abelian && levels[i + 1] <= levels[i])
            throw Error("ResidualChain: moduli must be strictly increasing past index 0");
    }
    if (G.kind == GroupSpec::Kind::finite_cyclic) {
        for (long l : levels)
            if (G.m % l != 0)
                throw Error("ResidualChain: level does not divide the group order");
        if (levels.back() != G.m)
            throw Error("ResidualChain: finite chain must end at the trivial group");
    }
}

Int ResidualChain::index(size_t i) const {
    Int idx(levels[i]);
    if (G.kind == GroupSpec::Kind::free_abelian) {
        Int out(1);
        for (int k = 0; k < G.n; ++k) out *= idx;
        return out;
    }
    return idx;
}

ResidualChain make_chain(GroupSpec g, std::vector<long> levels) {
    ResidualChain c{std::move(g), std::move(levels)};
    c.validate_or_throw();
    return c;
}

ResidualChain pow2_chain(GroupSpec g, int count) {
    std::vector<long> levels;
    for (int i = 0; i < count; ++i) levels.push_back(1L << i);
    return make_chain(std::move(g), std::move(levels));
}

long coset_count(const GroupSpec& g, long level) {
    if (level < 1) throw Error("coset_count: bad level");
    if (g.kind == GroupSpec::Kind::free_abelian) {
        long out = 1;
        for (int i = 0; i < g.n; ++i) out *= level;
        return out;
    }
    if (g.m % level != 0) throw Error("coset_count: level does not divide the order");
    return level;
}

long coset_index(const GroupSpec& g, long level, const GroupElt& e) {
    if (g.kind == GroupSpec::Kind::free_abelian) {
        long idx = 0;
        for (int i = 0; i < g.n; ++i) {
            long r = ((e[i] % level) + level) % level;
            idx = idx * level + r;
        }
        return idx;
    }
    return ((e[0] % level) + level) % level;
}

GroupElt coset_rep(const GroupSpec& g, long level, long index) {
    if (g.kind == GroupSpec::Kind::free_abelian) {
        GroupElt e(g.n, 0);
        for (int i = g.n - 1; i >= 0; --i) {
            e[i] = index % level;
            index /= level;
        }
        return e;
    }
    return {index};
}

std::string coset_label(const GroupSpec& g, long level, long index) {
    GroupElt e = coset_rep(g, level, index);
    std::ostringstream os;
    if (g.kind == GroupSpec::Kind::free_abelian) {
        os << "(";
        for (int i = 0; i < g.n; ++i) {
            if (i) os << ",";
            os << e[i];
        }
        os << ")";
    } else {
        os << e[0];
    }
    return os.str();
}

SpMat coinvariant_matrix(const GroupSpec& g, const GRMat& m, long level) {
    long nc = coset_count(g, level);
    SpMat out(static_cast<int>(m.rows * nc), static_cast<int>(m.cols * nc));
    for (const auto& [rc, e] : m.ent) {
        for (const auto& [el, coeff] : e.terms) {
            for (long f = 0; f < nc; ++f) {
                GroupElt rep = coset_rep(g, level, f);
                long to = coset_index(g, level, group_mul(g, rep, el));
                out.add_entry(static_cast<int>(rc.first * nc + to),
                              static_cast<int>(rc.second * nc + f), coeff);
            }
        }
    }
    return out;
}

BasedComplex coinvariants(const EquivariantComplex& x, long level) {
    long nc = coset_count(x.G, level);
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, SpMat> diffs;
    int lo = x.empty() ? 0 : x.min_degree();
    int hi = x.empty() ? -1 : x.max_degree();
    for (int j = lo; j <= hi; ++j) {
        ranks.push_back(static_cast<int>(x.rank(j) * nc));
        std::vector<std::string> lab;
        for (const auto& l : x.labels(j))
            for (long f = 0; f < nc; ++f) lab.push_back(l + "@" + coset_label(x.G, level, f));
        labels.push_back(std::move(lab));
        if (j > lo) {
            SpMat d = coinvariant_matrix(x.G, x.diff(j), level);
            if (!d.is_zero()) diffs[j] = std::move(d);
        }
    }
    return BasedComplex::make(lo, std::move(ranks), std::move(labels), std::move(diffs));
}

ChainMap coinvariants_map(const EqChainMap& f, long level, ComplexPtr src, ComplexPtr tgt) {
    ChainMap out{std::move(src), std::move(tgt), {}};
    for (const auto& [j, m] : f.comp) {
        SpMat s = coinvariant_matrix(f.src->G, m, level);
        if (!s.is_zero()) out.set(j, std::move(s));
    }
    out.verify_or_throw("coinvariants_map");
    return out;
}

ChainMap coinvariants_map(const EqChainMap& f, long level) {
    return coinvariants_map(f, level, share(coinvariants(*f.src, level)),
                            share(coinvariants(*f.tgt, level)));
}

CoinvariantNormCheck coinvariant_norm_check(const GroupSpec& g, const GRMat& m, long level) {
    CoinvariantNormCheck out{coinvariant_matrix(g, m, level).l1_norm(), m.norm(), false};
    out.holds = out.coinvariant_norm <= out.group_ring_norm;
    return out;
}

GroupElt SubgroupEmbedding::embed(const GroupElt& e) const {
    if (amb.kind == GroupSpec::Kind::free_abelian) {
        GroupElt out(amb.n, 0);
        for (int i = 0; i < sub.n; ++i) out[i] = e[i];
        return out;
    }
    long d = amb.m / sub.m;
    return {(e[0] * d) % amb.m};
}

SubgroupEmbedding subgroup_embedding(GroupSpec sub, GroupSpec amb) {
    if (sub.kind != amb.kind) throw Error("subgroup_embedding: kinds differ");
    if (sub.kind == GroupSpec::Kind::free_abelian) {
        if (sub.n > amb.n) throw Error("subgroup_embedding: subgroup rank too large");
    } else {
        if (amb.m % sub.m != 0) throw Error("subgroup_embedding: order does not divide");
    }
    return SubgroupEmbedding{sub, amb};
}

EquivariantComplex induce(const EquivariantComplex& x, const SubgroupEmbedding& emb) {
    if (!(x.G == emb.sub)) throw Error("induce: complex is not over the subgroup");
    std::map<int, GRMat> diffs;
    for (const auto& [j, m] : x.diffs) {
        GRMat d;
        d.rows = m.rows;
        d.cols = m.cols;
        for (const auto& [rc, e] : m.ent)
            for (const auto& [el, coeff] : e.terms)
                d.add_term(rc.first, rc.second, emb.embed(el), coeff);
        diffs[j] = std::move(d);
    }
    return make_equivariant(emb.amb, x.lo, x.ranks, x.labels_, std::move(diffs));
}

InducedDecomposition decompose_induced_coinvariants(const EquivariantComplex& x,
                                                    const SubgroupEmbedding& emb, long level) {
    if (emb.amb.kind != GroupSpec::Kind::free_abelian)
        throw Error("decompose_induced_coinvariants: free abelian groups only");
    InducedDecomposition out;
    EquivariantComplex ind = induce(x, emb);
    out.coinv = coinvariants(ind, level);
    out.inner = coinvariants(x, level);
    long inner_cosets = coset_count(emb.sub, level);
    long amb_cosets = coset_count(emb.amb, level);
    out.multiplicity = amb_cosets / inner_cosets;

    out.block_sum = BasedComplex();
    for (long c = 0; c < out.multiplicity; ++c) out.block_sum = direct_sum(out.block_sum, out.inner);

    ComplexPtr bs = share(out.block_sum);
    ComplexPtr cv = share(out.coinv);
    ChainMap iso{bs, cv, {}};
    ChainMap iso_inv{cv, bs, {}};
    int lo = out.coinv.empty() ? 0 : out.coinv.min_degree();
    int hi = out.coinv.empty() ? -1 : out.coinv.max_degree();
    for (int j = lo; j <= hi; ++j) {
        int rk_mod = x.rank(j);
        SpMat p(cv->rank(j), bs->rank(j));
        for (long copy = 0; copy < out.multiplicity; ++copy)
            for (int k = 0; k < rk_mod; ++k)
                for (long f = 0; f < inner_cosets; ++f) {
                    long col = copy * (static_cast<long>(rk_mod) * inner_cosets) +
                               static_cast<long>(k) * inner_cosets + f;
                    // full coset = (inner coords, copy coords), first coordinate major
                    long full = f * out.multiplicity + copy;
                    long row = static_cast<long>(k) * amb_cosets + full;
                    p.set_entry(static_cast<int>(row), static_cast<int>(col), Int(1));
                }
        if (p.cols() > 0) iso.set(j, p);
        if (p.rows() > 0) iso_inv.set(j, p.transpose());
    }
    iso.verify_or_throw("decompose_induced_coinvariants: basis bijection");
    iso_inv.verify_or_throw("decompose_induced_coinvariants: inverse bijection");
    out.iso = std::move(iso);
    out.iso_inv = std::move(iso_inv);
    return out;
}

CertifiedRebuilding descend_retract(const EqRetract& r, long level, int n, const Quality& q,
                                    RebuildKind kind) {
    // group-ring ledger
    for (int j = (r.X->empty() ? 0 : r.X->min_degree()); j <= n; ++j) {
        Int rks(r.X->rank(j)), rkc(r.Xp->rank(j));
        if (sgn(rks) == 0 && sgn(rkc) == 0) continue;
        Rat lhs = Rat(rkc) * q.T;
        Rat rhs = (q.kappa_exact ? *q.kappa_exact : Rat(q.kappa)) * Rat(rks);
        bool ok = q.kappa_exact ? (lhs <= rhs)
                                : (mpz_get_d(rkc.get_mpz_t()) <=
                                   q.kappa * mpz_get_d(rks.get_mpz_t()) / q.T.get_d());
        if (!ok)
            throw Error("descend_retract: group-ring rank ledger fails at degree " +
                        std::to_string(j));
    }
    if (kind_at_least(kind, RebuildKind::weak)) {
        double bound = q.norm_bound();
        auto chk = [&](const Int& v, const std::string& name) {
            if (mpz_get_d(v.get_mpz_t()) > bound)
                throw Error("descend_retract: group-ring norm ledger fails for " + name);
        };
        for (int j = (r.Xp->empty() ? 0 : r.Xp->min_degree()); j <= n; ++j)
            chk(r.Xp->diff(j).norm(), "d_X'");
        for (const auto& [j, m] : r.xi.comp)
            if (j <= n) chk(m.norm(), "xi");
        if (kind == RebuildKind::full) {
            for (const auto& [j, m] : r.xi_p.comp)
                if (j <= n) chk(m.norm(), "xi'");
            for (const auto& [j, m] : r.Xi)
                if (j <= n) chk(m.norm(), "Xi");
        }
    }

    ComplexPtr X = share(coinvariants(*r.X, level));
    ComplexPtr Xp = share(coinvariants(*r.Xp, level));
    ChainMap xi = coinvariants_map(r.xi, level, X, Xp);
    ChainMap xi_p = coinvariants_map(r.xi_p, level, Xp, X);
    std::map<int, SpMat> Xi;
    for (const auto& [j, m] : r.Xi) {
        SpMat s = coinvariant_matrix(r.X->G, m, level);
        if (!s.is_zero()) Xi[j] = std::move(s);
    }
    HomotopyRetract ret = verify_retract(X, Xp, xi, xi_p, std::move(Xi));
    return check_quality(ret, n, q, kind);
}

}  // namespace zrc
