#include "zrc/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace zrc {

namespace {

std::string fmt12(double v) {
    char buf[64];
    snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return static_cast<int>(r);
}

}  // namespace

GradientReport gradient_experiment(const GroupSpec& g, const ResidualChain& chain,
                                   const std::vector<int>& degrees,
                                   const std::vector<FieldSpec>& fields) {
    chain.validate_or_throw();
    if (!(chain.G == g)) throw Error("gradient_experiment: chain group mismatch");
    int max_deg = 0;
    for (int j : degrees) {
        if (j < 0) throw Error("gradient_experiment: negative degree");
        max_deg = std::max(max_deg, j);
    }
    EquivariantComplex res;
    if (g.kind == GroupSpec::Kind::free_abelian) {
        res = koszul_resolution(g);
        if (max_deg > g.n)
            throw Error("gradient_experiment: degree exceeds the resolution length");
    } else {
        res = koszul_resolution(g, max_deg + 2);
    }

    GradientReport rep;
    rep.group = g.name();
    for (size_t i = 0; i < chain.size(); ++i) {
        BasedComplex coinv = coinvariants(res, chain.levels[i]);
        Int index = chain.index(i);
        for (int j : degrees) {
            HomologyGroup h = integer_homology(coinv, j);
            for (const FieldSpec& f : fields) {
                GradientRow row;
                row.group = rep.group;
                row.j = j;
                row.level = static_cast<int>(i);
                row.index = index;
                row.field = f.name();
                row.betti = field_betti(coinv, j, f);
                row.log_tors = h.log_torsion;
                row.betti_per_index = Rat(row.betti) / Rat(index);
                row.betti_per_index.canonicalize();
                row.log_tors_per_index = h.log_torsion / mpz_get_d(index.get_mpz_t());
                rep.rows.push_back(std::move(row));
            }
        }
    }
    return rep;
}

void write_gradient_csv(const GradientReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "group,j,i,index,field,betti,log_tors,betti_per_index,log_tors_per_index\n";
    for (const auto& r : rep.rows)
        out << r.group << "," << r.j << "," << r.level << "," << r.index.get_str() << ","
            << r.field << "," << r.betti.get_str() << "," << fmt12(r.log_tors) << ","
            << fmt12(r.betti_per_index.get_d()) << "," << fmt12(r.log_tors_per_index) << "\n";
}

Json gradient_to_json(const GradientReport& rep) {
    Json rows = Json::array();
    for (const auto& r : rep.rows) {
        Json row;
        row["group"] = r.group;
        row["j"] = r.j;
        row["i"] = r.level;
        row["index"] = r.index.get_str();
        row["field"] = r.field;
        row["betti"] = r.betti.get_str();
        row["log_tors"] = r.log_tors;
        row["betti_per_index"] = rat_to_string(r.betti_per_index);
        row["log_tors_per_index"] = r.log_tors_per_index;
        rows.push_back(std::move(row));
    }
    Json out;
    out["group"] = rep.group;
    out["note"] =
        "rows are samples along a finite chain prefix; the final row is the last sample, "
        "not a limit";
    out["rows"] = std::move(rows);
    return out;
}

BoundCurve cwr_bound_curve(int group_rank, const std::vector<int>& degrees,
                           const std::vector<Rat>& T_grid, const ResidualChain& chain,
                           const std::string& cert_dir) {
    chain.validate_or_throw();
    GroupSpec g = GroupSpec::free_abelian(group_rank);
    if (!(chain.G == g)) throw Error("cwr_bound_curve: chain group mismatch");
    for (int j : degrees)
        if (j < 0 || j > group_rank - 1)
            throw Error("cwr_bound_curve: the bound applies in degrees 0.." +
                        std::to_string(group_rank - 1));

    EquivariantComplex res = koszul_resolution(g);
    BoundCurve curve;
    curve.group = g.name();
    for (size_t i = 0; i < chain.size(); ++i) {
        long d = chain.levels[i];
        BasedComplex coinv = coinvariants(res, d);
        Int index = chain.index(i);
        double index_d = mpz_get_d(index.get_mpz_t());
        for (const Rat& T : T_grid) {
            bool certified = false;
            Rat T_prime;
            double kappa = 1.0;
            std::string cert_id;
            try {
                AmenableRebuildReport rep = amenable_weak_rebuilding(group_rank, d, T);
                certified = true;
                T_prime = rep.T_prime;
                kappa = rep.cert.quality.kappa;
                std::ostringstream id;
                id << "z" << group_rank << "-i" << i << "-d" << d << "-T" << rat_to_string(T);
                cert_id = id.str();
                if (!cert_dir.empty())
                    write_json_file(cert_dir + "/" + cert_id + ".json",
                                    certificate_to_json(rep.cert));
            } catch (const Error&) {
                QuotientQuality qq{Rat(0), 1.0, false};
                try {
                    InteriorSubcomplex sub = interior_subcomplex(res, d);
                    AugmentedRetractResult ar =
                        augmented_retract(sub.incl, koszul_nullhomotopy(res, d, sub));
                    qq = quality_from_quotient(*sub.incl.X, *ar.Yplus, group_rank);
                } catch (const Error&) {
                }
                T_prime = qq.T_prime;
                kappa = qq.kappa;
            }
            for (int j : degrees) {
                BoundCurveRow row;
                row.group = curve.group;
                row.j = j;
                row.T = T;
                row.level = static_cast<int>(i);
                row.index = index;
                row.d = d;
                row.certified = certified;
                row.T_prime = T_prime;
                row.kappa = kappa;
                row.bound = kappa * kappa / T.get_d() * binom(group_rank, j) *
                            (1.0 + std::log(T.get_d()));
                row.measured = integer_homology(coinv, j).log_torsion / index_d;
                row.cert_id = cert_id;
                curve.rows.push_back(std::move(row));
            }
        }
    }
    return curve;
}

void write_bound_curve_csv(const BoundCurve& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "group,j,T,i,index,d,certified,T_prime,kappa,bound,measured,cert_id\n";
    for (const auto& r : curve.rows)
        out << r.group << "," << r.j << "," << rat_to_string(r.T) << "," << r.level << ","
            << r.index.get_str() << "," << r.d << "," << (r.certified ? 1 : 0) << ","
            << rat_to_string(r.T_prime) << "," << fmt12(r.kappa) << "," << fmt12(r.bound) << ","
            << fmt12(r.measured) << "," << r.cert_id << "\n";
}

Json bound_curve_to_json(const BoundCurve& curve) {
    Json rows = Json::array();
    for (const auto& r : curve.rows) {
        Json row;
        row["group"] = r.group;
        row["j"] = r.j;
        row["T"] = rat_to_string(r.T);
        row["i"] = r.level;
        row["index"] = r.index.get_str();
        row["d"] = r.d;
        row["certified"] = r.certified;
        row["T_prime"] = rat_to_string(r.T_prime);
        row["kappa"] = r.kappa;
        row["bound"] = r.bound;
        row["measured"] = r.measured;
        row["cert_id"] = r.cert_id;
        rows.push_back(std::move(row));
    }
    Json out;
    out["group"] = curve.group;
    out["rows"] = std::move(rows);
    return out;
}

BootstrapReport bootstrap_demo(long d, const Rat& T) {
    if (d < 1) throw Error("bootstrap_demo: d must be >= 1");
    if (T > Rat(d)) throw Error("bootstrap_demo: T must be <= d");

    GroupSpec G2 = GroupSpec::free_abelian(2);
    GroupSpec G1 = GroupSpec::free_abelian(1);
    SubgroupEmbedding emb = subgroup_embedding(G1, G2);

    // line complex over Z^2 with Z x {0} stabilisers: both modules are
    // replaced by the induced Koszul resolution of the subgroup
    EquivariantComplex K1 = koszul_resolution(G1);
    EqComplexPtr P = eq_share(induce(K1, emb));

    // central exact lift of the line differential t_2 - 1 (zero homotopy)
    GRMat t2m1;
    t2m1.rows = t2m1.cols = 1;
    t2m1.add_term(0, 0, {0, 1}, Int(1));
    t2m1.add_term(0, 0, {0, 0}, Int(-1));
    EqChainMap f{P, P, {}};
    f.set(0, t2m1);
    f.set(1, t2m1);
    f.verify_or_throw("bootstrap_demo: lifted differential");

    EquivariantComplex Chat = eq_cone(f);

    BootstrapReport rep;
    rep.d = d;
    rep.T = T;
    for (int j = Chat.min_degree(); j <= Chat.max_degree(); ++j)
        rep.replaced_ranks.push_back(Chat.rank(j));

    // coinvariants commute with the cone on the nose
    BasedComplex C = coinvariants(Chat, d);
    ChainMap fL = coinvariants_map(f, d);
    ConeData cfl = cone(fL);
    if (!(*cfl.cone == C))
        throw Error("bootstrap_demo: coinvariants of the cone differ from the cone of "
                    "coinvariants");

    for (int j = 0; j <= 2; ++j) {
        HomologyGroup h = integer_homology(C, j);
        rep.betti.push_back(h.betti);
        rep.log_torsion.push_back(h.log_torsion);
    }
    rep.matches_koszul2 = homology_equal(C, coinvariants(koszul_resolution(G2), d));

    // rebuild: d copies of the circle rebuilding, transported along the
    // induced-coinvariants decomposition, then the mapping-cone constructor
    InducedDecomposition dec = decompose_induced_coinvariants(K1, emb, d);
    rep.multiplicity = dec.multiplicity;
    if (dec.multiplicity != d) throw Error("bootstrap_demo: unexpected multiplicity");

    CertifiedRebuilding base = circle_rebuild(d, T);
    if (!dec.inner.same_shape(*base.retract.X))
        throw Error("bootstrap_demo: inner coinvariants are not the circle complex");
    CertifiedRebuilding sum = base;
    for (long c = 1; c < d; ++c) sum = sum_rebuild(sum, base);

    HomotopyRetract transported = transport_retract(sum.retract, dec.iso, dec.iso_inv);
    CertifiedRebuilding rx = check_quality(transported, 1, sum.quality, RebuildKind::full);
    CertifiedRebuilding ry = check_quality(transported, 2, sum.quality, RebuildKind::full);

    rep.cert = cone_rebuild(rx, ry, fL, 2);
    rep.kappa = rep.cert.quality.kappa;
    if (!rep.cert.retract.X->same_shape(C))
        throw Error("bootstrap_demo: rebuilt complex does not match the coinvariants");
    for (int j = 0; j <= 2; ++j) rep.rebuilt_ranks.push_back(rep.cert.retract.Xp->rank(j));

    // independent re-verification
    check_quality(rep.cert.retract, rep.cert.n, rep.cert.quality, rep.cert.kind);
    return rep;
}

Json bootstrap_to_json(const BootstrapReport& rep, const std::string& cert_path) {
    Json out;
    out["d"] = rep.d;
    out["T"] = rat_to_string(rep.T);
    Json betti = Json::array();
    for (const Int& b : rep.betti) betti.push_back(b.get_str());
    out["betti"] = std::move(betti);
    out["log_torsion"] = rep.log_torsion;
    out["matches_koszul2"] = rep.matches_koszul2;
    out["multiplicity"] = rep.multiplicity;
    out["replaced_ranks"] = rep.replaced_ranks;
    out["rebuilt_ranks"] = rep.rebuilt_ranks;
    out["kappa"] = rep.kappa;
    out["certificate"] = cert_path;
    return out;
}

}  // namespace zrc
