#include "zrc/folner.hpp"

#include <algorithm>
#include <set>

namespace zrc {

long FolnerBox::size() const {
    long s = 1;
    for (int i = 0; i < n; ++i) s *= d;
    return s;
}

bool FolnerBox::contains(const GroupElt& e) const {
    for (int i = 0; i < n; ++i)
        if (e[i] < 0 || e[i] >= d) return false;
    return true;
}

FolnerBox folner_box(int n, long d) {
    if (n < 1 || d < 1) throw Error("folner_box: need n >= 1 and d >= 1");
    return FolnerBox{n, d};
}

namespace {

std::set<GroupElt> word_ball(const GroupSpec& g, const std::vector<GroupElt>& gens, int radius) {
    std::set<GroupElt> ball{group_id(g)};
    std::set<GroupElt> frontier = ball;
    for (int r = 0; r < radius; ++r) {
        std::set<GroupElt> next;
        for (const auto& e : frontier)
            for (const auto& s : gens) {
                GroupElt x = group_mul(g, e, s);
                if (!ball.count(x)) next.insert(x);
            }
        ball.insert(next.begin(), next.end());
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return ball;
}

}  // namespace

InteriorData interior(const FolnerBox& box, int radius, const std::vector<GroupElt>& gens) {
    if (radius < 0) throw Error("interior: negative radius");
    GroupSpec g = GroupSpec::free_abelian(box.n);
    std::set<GroupElt> ball = word_ball(g, gens, radius);
    InteriorData out;
    out.radius = radius;
    out.in_interior.assign(box.size(), 0);
    for (long idx = 0; idx < box.size(); ++idx) {
        GroupElt p = coset_rep(g, box.d, idx);
        bool inside = true;
        for (const auto& w : ball) {
            GroupElt q(p.size());
            for (int i = 0; i < box.n; ++i) q[i] = p[i] + w[i];
            if (!box.contains(q)) {
                inside = false;
                break;
            }
        }
        if (inside) {
            out.in_interior[idx] = 1;
            ++out.count;
        }
    }
    // cross-check the product form for the standard generating set
    if (gens == standard_generators(g)) {
        long expect = 1;
        for (int i = 0; i < box.n; ++i) expect *= std::max(0L, box.d - 2 * radius);
        if (expect != out.count) throw Error("interior: product form cross-check failed");
    }
    return out;
}

InteriorSubcomplex interior_subcomplex(const EquivariantComplex& x, long d,
                                       std::vector<GroupElt> gens) {
    if (x.G.kind != GroupSpec::Kind::free_abelian)
        throw Error("interior_subcomplex: free abelian groups only");
    GroupSpec g = x.G;
    std::set<GroupElt> supports;
    for (const auto& [j, m] : x.diffs)
        for (const auto& e : m.support()) supports.insert(e);

    if (gens.empty()) {
        std::set<GroupElt> s;
        for (const auto& e : standard_generators(g)) s.insert(e);
        for (const auto& e : supports) {
            if (e == group_id(g)) continue;
            s.insert(e);
            s.insert(group_inv(g, e));
        }
        gens.assign(s.begin(), s.end());
    } else {
        std::set<GroupElt> s(gens.begin(), gens.end());
        for (const auto& e : supports)
            if (!(e == group_id(g)) && !s.count(e))
                throw Error("interior_subcomplex: generating set misses a differential support");
    }

    int n_max = x.empty() ? 0 : x.max_degree();
    FolnerBox box = folner_box(g.n, d);
    ComplexPtr XL = share(coinvariants(x, d));

    InteriorSubcomplex out;
    std::map<int, std::vector<int>> pos;
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, SpMat> diffs;
    long nc = coset_count(g, d);
    for (int j = 0; j <= n_max; ++j) {
        out.interiors.push_back(interior(box, j + 1, gens));
        const InteriorData& in = out.interiors.back();
        std::vector<int> idx;
        std::vector<std::string> lab;
        for (int k = 0; k < x.rank(j); ++k)
            for (long f = 0; f < nc; ++f)
                if (in.in_interior[f]) {
                    idx.push_back(static_cast<int>(k * nc + f));
                    lab.push_back(XL->labels(j)[k * nc + f]);
                }
        pos[j] = std::move(idx);
        ranks.push_back(static_cast<int>(pos[j].size()));
        labels.push_back(std::move(lab));
    }
    for (int j = 1; j <= n_max; ++j) {
        SpMat full = XL->diff(j);
        SpMat sub = full.select(pos[j - 1], pos[j]);
        // closure: the restricted columns may not leave A
        SpMat cols = full.select_cols(pos[j]);
        if (cols.nnz() != sub.nnz())
            throw Error("interior_subcomplex: differential leaves the interior at degree " +
                        std::to_string(j));
        if (!sub.is_zero()) diffs[j] = std::move(sub);
    }
    ComplexPtr A = share(BasedComplex::make(0, std::move(ranks), std::move(labels),
                                            std::move(diffs)));
    out.incl = based_inclusion(XL, A, std::move(pos));
    return out;
}

KoszulContraction::KoszulContraction(int n) : n_(n), index_of_(1u << n, -1) {
    // per degree, bitmasks in the lex order of the index subsets (the Koszul
    // basis order)
    masks_.resize(n + 1);
    std::vector<std::vector<std::vector<int>>> subsets(n + 1);
    for (unsigned m = 0; m < (1u << n); ++m) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
            if (m & (1u << i)) s.push_back(i);
        subsets[s.size()].push_back(std::move(s));
    }
    for (int j = 0; j <= n; ++j) {
        std::sort(subsets[j].begin(), subsets[j].end());
        for (const auto& s : subsets[j]) {
            unsigned m = 0;
            for (int i : s) m |= 1u << i;
            index_of_[m] = static_cast<int>(masks_[j].size());
            masks_[j].push_back(m);
        }
    }
}

int KoszulContraction::degree_of(unsigned mask) const { return __builtin_popcount(mask); }

int KoszulContraction::basis_index(unsigned mask) const { return index_of_[mask]; }

unsigned KoszulContraction::mask_of(int degree, int index) const { return masks_[degree][index]; }

KoszulContraction::Elem KoszulContraction::contract_single(unsigned mask, const GroupElt& a) const {
    Elem out;
    for (int i = 0; i < n_; ++i) {
        if (mask & (1u << i)) break;  // coordinates below the first exterior slot only
        if (a[i] == 0) continue;
        GroupElt base(a);
        for (int k = 0; k < i; ++k) base[k] = 0;  // augmentation collapses earlier coordinates
        unsigned mask2 = mask | (1u << i);
        if (a[i] > 0) {
            for (long b = 0; b < a[i]; ++b) {
                base[i] = b;
                out[{mask2, base}] += 1;
            }
        } else {
            for (long b = a[i]; b < 0; ++b) {
                base[i] = b;
                out[{mask2, base}] -= 1;
            }
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
    return out;
}

std::map<int, SpMat> koszul_nullhomotopy(const EquivariantComplex& koszul, long d,
                                         const InteriorSubcomplex& sub) {
    const GroupSpec& g = koszul.G;
    KoszulContraction kc(g.n);
    long nc = coset_count(g, d);
    const BasedComplex& XL = *sub.incl.X;
    const BasedComplex& A = *sub.incl.A;

    std::map<int, SpMat> H;
    // degree -1: unit followed by the projection
    {
        SpMat h(XL.rank(0), 1);
        h.set_entry(0, 0, Int(1));
        H[-1] = std::move(h);
    }
    for (int j = 0; j <= A.max_degree() && !A.empty(); ++j) {
        if (A.rank(j) == 0) continue;
        SpMat h(XL.rank(j + 1), A.rank(j));
        const auto& idx = sub.incl.pos.at(j);
        for (int c = 0; c < A.rank(j); ++c) {
            int xl_index = idx[c];
            int k = xl_index / static_cast<int>(nc);
            long coset = xl_index % nc;
            unsigned mask = kc.mask_of(j, k);
            GroupElt a = coset_rep(g, d, coset);
            KoszulContraction::Elem res = kc.contract_single(mask, a);
            for (const auto& [key, coeff] : res) {
                int kp = kc.basis_index(key.first);
                long f = coset_index(g, d, key.second);
                h.add_entry(static_cast<int>(kp * nc + f), c, coeff);
            }
        }
        if (!h.is_zero()) H[j] = std::move(h);
    }
    return H;
}

AmenableRebuildReport amenable_weak_rebuilding(int group_rank, long d, const Rat& T) {
    GroupSpec g = GroupSpec::free_abelian(group_rank);
    EquivariantComplex K = koszul_resolution(g);
    InteriorSubcomplex sub = interior_subcomplex(K, d);
    std::map<int, SpMat> H = koszul_nullhomotopy(K, d, sub);
    AugmentedRetractResult ar = augmented_retract(sub.incl, H);

    int n = group_rank;
    QuotientQuality qq = quality_from_quotient(*sub.incl.X, *ar.Yplus, n);
    if (T > qq.T_prime)
        throw Error("amenable_weak_rebuilding: T = " + rat_to_string(T) +
                    " exceeds the maximal certified T' = " + rat_to_string(qq.T_prime));
    if (T < 1) throw Error("amenable_weak_rebuilding: T must be >= 1");

    Quality q = qq.kappa_is_one ? Quality::make_exact(T, Rat(1)) : Quality::make(T, qq.kappa);

    AmenableRebuildReport out;
    out.group_rank = group_rank;
    out.d = d;
    out.n = n;
    out.T_prime = qq.T_prime;
    out.kappa = qq.kappa;
    for (int j = 0; j <= n; ++j) {
        out.rank_X.push_back(sub.incl.X->rank(j));
        out.rank_A.push_back(sub.incl.A->rank(j));
        out.rank_Yplus.push_back(ar.Yplus->rank(j));
        double rx = static_cast<double>(sub.incl.X->rank(j));
        out.boundary_fraction.push_back(
            rx == 0.0 ? 0.0 : (rx - static_cast<double>(sub.incl.A->rank(j))) / rx);
    }
    out.cert = check_quality(ar.retract, n, q, RebuildKind::weak);
    return out;
}

}  // namespace zrc
