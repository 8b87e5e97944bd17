#include "zrc/rebuild.hpp"

#include <algorithm>
#include <cmath>

namespace zrc {

std::string kind_name(RebuildKind k) {
    switch (k) {
        case RebuildKind::domination: return "domination";
        case RebuildKind::weak: return "weak";
        case RebuildKind::full: return "full";
    }
    return "?";
}

RebuildKind kind_from_name(const std::string& s) {
    if (s == "domination") return RebuildKind::domination;
    if (s == "weak") return RebuildKind::weak;
    if (s == "full") return RebuildKind::full;
    throw Error("unknown rebuilding kind: " + s);
}

bool kind_at_least(RebuildKind k, RebuildKind req) {
    return static_cast<int>(k) >= static_cast<int>(req);
}

Quality Quality::make(Rat T, double kappa) {
    T.canonicalize();
    if (T < 1) throw Error("Quality: T must be >= 1");
    if (kappa < 1.0) throw Error("Quality: kappa must be >= 1");
    return Quality{std::move(T), kappa, std::nullopt};
}

Quality Quality::make_exact(Rat T, Rat kappa) {
    kappa.canonicalize();
    Quality q = make(std::move(T), kappa.get_d());
    if (kappa < 1) throw Error("Quality: kappa must be >= 1");
    q.kappa_exact = std::move(kappa);
    return q;
}

double Quality::norm_bound() const {
    return std::exp(kappa) * std::pow(T.get_d(), kappa);
}

namespace {

constexpr double kGuard = 1e-9;

enum class Cmp { pass, fail, indeterminate };

Cmp cmp_leq(double lhs, double rhs) {
    if (lhs <= rhs * (1.0 - kGuard)) return Cmp::pass;
    if (lhs >= rhs * (1.0 + kGuard)) return Cmp::fail;
    return Cmp::indeterminate;
}

std::string fmt(double v) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

CertifiedRebuilding check_quality(const HomotopyRetract& retract, int n, const Quality& q,
                                  RebuildKind kind) {
    CertifiedRebuilding cert{retract, n, kind, q, {}, {}};
    const BasedComplex& X = *retract.X;
    const BasedComplex& Xp = *retract.Xp;
    int lo = 0;
    if (!X.empty()) lo = X.min_degree();
    if (!Xp.empty()) lo = std::min(lo, Xp.min_degree());

    for (int j = lo; j <= n; ++j) {
        Int rks(X.rank(j)), rkc(Xp.rank(j));
        if (sgn(rks) == 0 && sgn(rkc) == 0) continue;
        RankCheckRow row{j, rkc, rks, 0.0, false, false};
        if (q.kappa_exact) {
            Rat lhs = Rat(rkc) * q.T;
            Rat rhs = *q.kappa_exact * Rat(rks);
            row.exact = true;
            row.pass = lhs <= rhs;
            row.rhs = Rat(*q.kappa_exact * Rat(rks) / q.T).get_d();
        } else {
            double rhs = q.kappa * mpz_get_d(rks.get_mpz_t()) / q.T.get_d();
            row.rhs = rhs;
            Cmp c = cmp_leq(mpz_get_d(rkc.get_mpz_t()), rhs);
            if (c == Cmp::indeterminate)
                throw Error("check_quality: indeterminate rank comparison at degree " +
                            std::to_string(j) + " (" + rkc.get_str() + " vs " + fmt(rhs) + ")");
            row.pass = c == Cmp::pass;
        }
        cert.rank_ledger.push_back(row);
        if (!row.pass)
            throw Error("check_quality: rank inequality fails at degree " + std::to_string(j) +
                        ": rk X'_j = " + rkc.get_str() + " > kappa T^-1 rk X_j = " + fmt(row.rhs));
    }

    if (kind_at_least(kind, RebuildKind::weak)) {
        double bound = q.norm_bound();
        auto check_norm = [&](const std::string& name, int degree, const Int& value) {
            NormCheckRow row{name, degree, value, bound, false};
            Cmp c = cmp_leq(mpz_get_d(value.get_mpz_t()), bound);
            if (c == Cmp::indeterminate)
                throw Error("check_quality: indeterminate norm comparison for " + name +
                            " at degree " + std::to_string(degree) + " (" + value.get_str() +
                            " vs " + fmt(bound) + ")");
            row.pass = c == Cmp::pass;
            cert.norm_ledger.push_back(row);
            if (!row.pass)
                throw Error("check_quality: norm inequality fails for " + name + " at degree " +
                            std::to_string(degree) + ": " + value.get_str() + " > exp(kappa) T^kappa = " +
                            fmt(bound));
        };
        for (int j = lo; j <= n; ++j) {
            check_norm("d_X'", j, Xp.diff(j).l1_norm());
            check_norm("xi", j, retract.xi.at(j).l1_norm());
            if (kind == RebuildKind::full) {
                check_norm("xi'", j, retract.xi_p.at(j).l1_norm());
                check_norm("Xi", j, retract.Xi.at(j).l1_norm());
            }
        }
    }
    return cert;
}

CertifiedRebuilding recheck(const CertifiedRebuilding& cert, int n, RebuildKind kind) {
    return check_quality(cert.retract, n, cert.quality, kind);
}

BasedComplex circle_complex(long d) {
    if (d < 1) throw Error("circle_complex: d must be >= 1");
    int di = static_cast<int>(d);
    SpMat m(di, di);
    for (int i = 0; i < di; ++i) {
        m.add_entry((i + 1) % di, i, 1);
        m.add_entry(i, i, -1);
    }
    std::vector<std::vector<std::string>> labels(2);
    for (int i = 0; i < di; ++i) labels[0].push_back("v" + std::to_string(i));
    for (int i = 0; i < di; ++i) labels[1].push_back("e" + std::to_string(i));
    std::map<int, SpMat> diffs;
    if (!m.is_zero()) diffs[1] = std::move(m);
    return BasedComplex::make(0, {di, di}, std::move(labels), std::move(diffs));
}

namespace {

HomotopyRetract circle_retract_from_chunks(long d, const std::vector<long>& a) {
    int m = static_cast<int>(a.size()) - 1;
    ComplexPtr X = share(circle_complex(d));
    ComplexPtr Xp = share(circle_complex(m));

    // chunk index of vertex i: k with a_{k-1} < i <= a_k, and 0 for i = 0
    std::vector<int> chunk_of(d, 0);
    for (long i = 1; i < d; ++i) {
        int k = static_cast<int>(std::upper_bound(a.begin(), a.end(), i - 1) - a.begin());
        chunk_of[i] = k % m;
    }
    std::vector<char> is_boundary(d, 0);
    std::vector<int> boundary_index(d, -1);
    for (int k = 0; k < m; ++k) {
        is_boundary[a[k]] = 1;
        boundary_index[a[k]] = k;
    }

    ChainMap xi{X, Xp, {}};
    {
        SpMat x0(m, static_cast<int>(d));
        for (long i = 0; i < d; ++i) x0.set_entry(chunk_of[i], static_cast<int>(i), 1);
        xi.set(0, std::move(x0));
        SpMat x1(m, static_cast<int>(d));
        for (long i = 0; i < d; ++i)
            if (is_boundary[i]) x1.set_entry(boundary_index[i], static_cast<int>(i), 1);
        xi.set(1, std::move(x1));
    }

    ChainMap xi_p{Xp, X, {}};
    {
        SpMat y0(static_cast<int>(d), m);
        for (int k = 0; k < m; ++k) y0.set_entry(static_cast<int>(a[k]), k, 1);
        xi_p.set(0, std::move(y0));
        SpMat y1(static_cast<int>(d), m);
        for (int k = 0; k < m; ++k)
            for (long i = a[k]; i < a[k + 1]; ++i) y1.set_entry(static_cast<int>(i), k, 1);
        xi_p.set(1, std::move(y1));
    }

    std::map<int, SpMat> Xi;
    {
        SpMat h(static_cast<int>(d), static_cast<int>(d));
        for (long i = 0; i < d; ++i) {
            if (is_boundary[i]) continue;
            int k = static_cast<int>(std::upper_bound(a.begin(), a.end(), i - 1) - a.begin());
            for (long e = i; e < a[k]; ++e) h.add_entry(static_cast<int>(e), static_cast<int>(i), -1);
        }
        if (!h.is_zero()) Xi[0] = std::move(h);
    }
    return verify_retract(X, Xp, xi, xi_p, std::move(Xi));
}

}  // namespace

HomotopyRetract circle_coarse_retract(long d) {
    return circle_retract_from_chunks(d, {0, d});
}

std::vector<long> circle_chunks(long d, const Rat& T) {
    if (d < 1) throw Error("circle_chunks: d must be >= 1");
    if (T < 1 || T > Rat(d)) throw Error("circle_chunks: need 1 <= T <= d");
    // c = ceil(T/2)
    Int c_int;
    mpz_cdiv_q(c_int.get_mpz_t(), T.get_num_mpz_t(), Int(2 * T.get_den()).get_mpz_t());
    long c = c_int.get_si();
    if (c < 1) c = 1;
    Int floorT;
    mpz_fdiv_q(floorT.get_mpz_t(), T.get_num_mpz_t(), T.get_den_mpz_t());

    long full = d / c, rem = d % c;
    std::vector<long> a;
    for (long k = 0; k <= full; ++k) a.push_back(k * c);
    if (rem > 0) {
        if (Rat(2 * rem) >= T || full == 0) {
            a.push_back(d);
        } else if (Int(c + rem) <= floorT) {
            a.back() = d;  // merge tail into the last full chunk
        } else {
            long total = c + rem;  // rebalance the final two chunks
            a.back() = a[a.size() - 2] + (total + 1) / 2;
            a.push_back(d);
        }
    }
    return a;
}

CertifiedRebuilding circle_rebuild(long d, const Rat& T) {
    if (T > Rat(d)) throw Error("circle_rebuild: T must be <= d");
    std::vector<long> a = circle_chunks(d, T);
    HomotopyRetract r = circle_retract_from_chunks(d, a);
    return check_quality(r, 1, Quality::make_exact(T, Rat(2)), RebuildKind::full);
}

CertifiedRebuilding sum_rebuild(const CertifiedRebuilding& r1, const CertifiedRebuilding& r2) {
    if (r1.n != r2.n) throw Error("sum_rebuild: degree bounds differ");
    if (r1.quality.T != r2.quality.T) throw Error("sum_rebuild: T differs");
    if (r1.kind != r2.kind) throw Error("sum_rebuild: kinds differ");

    ComplexPtr X = share(direct_sum(*r1.retract.X, *r2.retract.X));
    ComplexPtr Xp = share(direct_sum(*r1.retract.Xp, *r2.retract.Xp));
    ChainMap xi = map_sum(r1.retract.xi, r2.retract.xi, X, Xp);
    ChainMap xi_p = map_sum(r1.retract.xi_p, r2.retract.xi_p, Xp, X);
    ChainHomotopy Xi =
        homotopy_sum(r1.retract.Xi, r2.retract.Xi, ChainMap::identity(X), compose(xi_p, xi));
    HomotopyRetract r = verify_retract(X, Xp, xi, xi_p, Xi.comp);

    Quality q = Quality::make(r1.quality.T, std::max(r1.quality.kappa, r2.quality.kappa));
    if (r1.quality.kappa_exact && r2.quality.kappa_exact)
        q = Quality::make_exact(r1.quality.T,
                                std::max(*r1.quality.kappa_exact, *r2.quality.kappa_exact));
    return check_quality(r, r1.n, q, r1.kind);
}

CertifiedRebuilding cone_rebuild(const CertifiedRebuilding& rx, const CertifiedRebuilding& ry,
                                 const ChainMap& f, int n) {
    if (rx.kind != RebuildKind::full)
        throw Error("cone_rebuild: the source certificate must be a full rebuilding");
    if (rx.n < n - 1) throw Error("cone_rebuild: source certificate degree bound below n-1");
    if (ry.n < n) throw Error("cone_rebuild: target certificate degree bound below n");
    if (rx.quality.T != ry.quality.T) throw Error("cone_rebuild: T differs");
    f.verify_or_throw("cone_rebuild: f");
    if (!f.src->same_shape(*rx.retract.X) || !f.tgt->same_shape(*ry.retract.X))
        throw Error("cone_rebuild: f endpoints do not match the certificates");

    const HomotopyRetract& RX = rx.retract;
    const HomotopyRetract& RY = ry.retract;

    // f' = ups o f o xi'
    ChainMap fp = compose(RY.xi, compose(f, RX.xi_p));

    ChainMap idX = ChainMap::identity(RX.X);
    ChainMap idY = ChainMap::identity(RY.X);

    auto comp_hom = [](const ChainMap& pre, const ChainHomotopy& H, const ChainMap& post,
                       int sign) {
        // post_{j+1} o H_j o pre_j, scaled by sign
        std::map<int, SpMat> out;
        const ComplexPtr& src = pre.src;
        if (src->empty()) return out;
        for (int j = src->min_degree(); j <= src->max_degree(); ++j) {
            SpMat m = post.at(j + 1) * H.at(j) * pre.at(j);
            if (sign < 0) m = -m;
            if (!m.is_zero()) out[j] = std::move(m);
        }
        return out;
    };

    HomotopyCube cube;
    cube.f = f;
    cube.g = f;
    cube.fp = fp;
    cube.gp = f;
    cube.a = idX;
    cube.b = idY;
    cube.ap = RX.xi_p;
    cube.bp = RY.xi_p;
    cube.xi = RX.xi;
    cube.ups = RY.xi;
    cube.zeta = idX;
    cube.omega = idY;
    cube.H = ChainHomotopy{compose(f, idX), compose(idY, f), {}};
    cube.Hp = ChainHomotopy{compose(f, RX.xi_p), compose(RY.xi_p, fp),
                            comp_hom(compose(f, RX.xi_p), RY.Xi, idY, +1)};
    cube.A = ChainHomotopy{compose(idX, idX), compose(RX.xi_p, RX.xi), RX.Xi.comp};
    cube.B = ChainHomotopy{compose(idY, idY), compose(RY.xi_p, RY.xi), RY.Xi.comp};
    cube.F = ChainHomotopy{compose(fp, RX.xi), compose(RY.xi, f),
                           comp_hom(ChainMap::identity(RX.X), RX.Xi, compose(RY.xi, f), -1)};
    cube.G = ChainHomotopy{compose(f, idX), compose(idY, f), {}};
    cube.Phi = GradedMap{RX.X, RY.X, 2, {}};
    if (!RX.X->empty())
        for (int j = RX.X->min_degree(); j <= RX.X->max_degree(); ++j) {
            SpMat m = RY.Xi.at(j + 1) * f.at(j + 1) * RX.Xi.at(j);
            if (!m.is_zero()) cube.Phi.comp[j] = -m;
        }

    HomotopySquare filled = cube_fill_square(cube);

    HomotopyRetract r = verify_retract(filled.f.src, filled.f.tgt, filled.f, filled.b,
                                       filled.H.comp);

    double kappa = rx.quality.kappa + ry.quality.kappa + std::log(3.0) +
                   log_plus_mpz(f.max_norm_upto(n));
    return check_quality(r, n, Quality::make(rx.quality.T, kappa), ry.kind);
}

CertifiedRebuilding compose_rebuild(const CertifiedRebuilding& r1,
                                    const CertifiedRebuilding& r2) {
    if (!r1.retract.Xp->same_shape(*r2.retract.X))
        throw Error("compose_rebuild: middle complexes do not match");
    if (r1.n != r2.n) throw Error("compose_rebuild: degree bounds differ");
    RebuildKind kind = (r1.kind == RebuildKind::domination || r2.kind == RebuildKind::domination)
                           ? RebuildKind::domination
                           : RebuildKind::weak;

    const HomotopyRetract& A = r1.retract;
    const HomotopyRetract& B = r2.retract;
    ChainMap fwd = compose(B.xi, A.xi);
    ChainMap bwd = compose(A.xi_p, B.xi_p);
    std::map<int, SpMat> H;
    int lo = A.X->empty() ? 0 : A.X->min_degree();
    int hi = A.X->empty() ? -1 : A.X->max_degree();
    for (int j = lo; j <= hi; ++j) {
        SpMat m = A.Xi.at(j) + A.xi_p.at(j + 1) * B.Xi.at(j) * A.xi.at(j);
        if (!m.is_zero()) H[j] = std::move(m);
    }
    HomotopyRetract r = verify_retract(A.X, B.Xp, fwd, bwd, std::move(H));

    Rat T = r1.quality.T * r2.quality.T;
    double kappa = 2.0 * r2.quality.kappa * r1.quality.kappa;
    Quality q = Quality::make(T, kappa);
    if (r1.quality.kappa_exact && r2.quality.kappa_exact)
        q = Quality::make_exact(T, Rat(2) * *r2.quality.kappa_exact * *r1.quality.kappa_exact);
    return check_quality(r, r1.n, q, kind);
}

HomotopyRetract transport_retract(const HomotopyRetract& r, const ChainMap& iso,
                                  const ChainMap& iso_inv) {
    iso.verify_or_throw("transport_retract: iso");
    iso_inv.verify_or_throw("transport_retract: inverse");
    if (!iso.src->same_shape(*r.X) || !iso_inv.tgt->same_shape(*r.X))
        throw Error("transport_retract: iso endpoints do not match");
    ChainMap a = compose(iso, iso_inv), b = compose(iso_inv, iso);
    ChainMap id_new = ChainMap::identity(iso.tgt), id_old = ChainMap::identity(iso.src);
    for (int j = iso.tgt->empty() ? 1 : iso.tgt->min_degree();
         !iso.tgt->empty() && j <= iso.tgt->max_degree(); ++j)
        if (a.at(j) != id_new.at(j)) throw Error("transport_retract: not mutually inverse");
    for (int j = iso.src->empty() ? 1 : iso.src->min_degree();
         !iso.src->empty() && j <= iso.src->max_degree(); ++j)
        if (b.at(j) != id_old.at(j)) throw Error("transport_retract: not mutually inverse");

    ChainMap xi = compose(r.xi, iso_inv);
    ChainMap xi_p = compose(iso, r.xi_p);
    std::map<int, SpMat> H;
    int lo = iso.tgt->empty() ? 0 : iso.tgt->min_degree();
    int hi = iso.tgt->empty() ? -1 : iso.tgt->max_degree();
    for (int j = lo; j <= hi; ++j) {
        SpMat m = iso.at(j + 1) * r.Xi.at(j) * iso_inv.at(j);
        if (!m.is_zero()) H[j] = std::move(m);
    }
    return verify_retract(iso.tgt, r.Xp, xi, xi_p, std::move(H));
}

Json certificate_to_json(const CertifiedRebuilding& cert) {
    Json j;
    j["kind"] = kind_name(cert.kind);
    j["n"] = cert.n;
    j["T"] = rat_to_string(cert.quality.T);
    j["kappa"] = cert.quality.kappa;
    if (cert.quality.kappa_exact) j["kappa_exact"] = rat_to_string(*cert.quality.kappa_exact);
    Json ranks = Json::array();
    for (const auto& r : cert.rank_ledger) {
        Json row;
        row["degree"] = r.degree;
        row["rank_lhs"] = r.rk_compressed.get_str();
        row["rank_src"] = r.rk_source.get_str();
        row["rank_rhs"] = r.rhs;
        row["exact"] = r.exact;
        row["pass"] = r.pass;
        ranks.push_back(std::move(row));
    }
    j["rank_ledger"] = std::move(ranks);
    Json norms = Json::array();
    for (const auto& r : cert.norm_ledger) {
        Json row;
        row["map"] = r.map_name;
        row["degree"] = r.degree;
        row["value"] = r.value.get_str();
        row["bound"] = r.bound;
        row["pass"] = r.pass;
        norms.push_back(std::move(row));
    }
    j["norm_ledger"] = std::move(norms);
    Json retract;
    retract["X"] = complex_to_json(*cert.retract.X);
    retract["Xp"] = complex_to_json(*cert.retract.Xp);
    retract["xi"] = chain_map_to_json(cert.retract.xi);
    retract["xi_p"] = chain_map_to_json(cert.retract.xi_p);
    retract["Xi"] = homotopy_comp_to_json(cert.retract.Xi.comp);
    j["retract"] = std::move(retract);
    return j;
}

CertifiedRebuilding certificate_from_json(const Json& j) {
    ComplexPtr X = share(complex_from_json(j.at("retract").at("X")));
    ComplexPtr Xp = share(complex_from_json(j.at("retract").at("Xp")));
    ChainMap xi = chain_map_from_json(j.at("retract").at("xi"), X, Xp);
    ChainMap xi_p = chain_map_from_json(j.at("retract").at("xi_p"), Xp, X);
    std::map<int, SpMat> Xi = homotopy_comp_from_json(j.at("retract").at("Xi"), *X, *X, 1);
    HomotopyRetract r = verify_retract(X, Xp, xi, xi_p, std::move(Xi));

    Rat T = rat_from_string(j.at("T").get<std::string>());
    Quality q = j.contains("kappa_exact")
                    ? Quality::make_exact(T, rat_from_string(j.at("kappa_exact").get<std::string>()))
                    : Quality::make(T, j.at("kappa").get<double>());
    if (!j.contains("kappa_exact")) q.kappa = j.at("kappa").get<double>();
    return check_quality(r, j.at("n").get<int>(), q, kind_from_name(j.at("kind").get<std::string>()));
}

}  // namespace zrc
