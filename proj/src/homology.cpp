#include "zrc/homology.hpp"

#include <algorithm>

namespace zrc {

FieldSpec FieldSpec::Fp(long p) {
    Int z(p);
    if (p < 2 || mpz_probab_prime_p(z.get_mpz_t(), 30) == 0)
        throw Error("FieldSpec: " + std::to_string(p) + " is not prime");
    return FieldSpec{false, p};
}

std::string FieldSpec::name() const { return rationals ? "Q" : "F" + std::to_string(p); }

HomologyGroup integer_homology(const BasedComplex& x, int j) {
    HomologyGroup h;
    int rk = x.rank(j);
    if (rk == 0) return h;
    int r_out = rank_q(x.diff(j));
    SmithDecomposition s = smith_normal_form(x.diff(j + 1));
    h.betti = rk - r_out - s.rank;
    if (sgn(h.betti) < 0) throw Error("integer_homology: negative betti (invalid complex)");
    h.torsion_factors = s.torsion_factors();
    for (const Int& f : h.torsion_factors) h.log_torsion += log_mpz(f);
    return h;
}

Int field_betti(const BasedComplex& x, int j, const FieldSpec& field) {
    int rk = x.rank(j);
    if (rk == 0) return Int(0);
    int r_out, r_in;
    if (field.rationals) {
        r_out = rank_q(x.diff(j));
        r_in = rank_q(x.diff(j + 1));
    } else {
        r_out = rank_mod_p(x.diff(j), field.p);
        r_in = rank_mod_p(x.diff(j + 1), field.p);
    }
    Int b = rk - r_out - r_in;
    if (sgn(b) < 0) throw Error("field_betti: negative dimension (invalid complex)");
    return b;
}

GabberResult gabber_check(const BasedComplex& x, int j) {
    GabberResult out;
    HomologyGroup h = integer_homology(x, j);
    out.log_torsion = h.log_torsion;
    out.bound = static_cast<double>(x.rank(j)) * log_plus_mpz(x.diff(j + 1).l1_norm());
    out.holds = out.log_torsion <= out.bound + 1e-9 * std::max(1.0, out.bound);
    return out;
}

bool homology_equal(const BasedComplex& x, const BasedComplex& y) {
    int lo = INT32_MAX, hi = INT32_MIN;
    for (const BasedComplex* c : {&x, &y}) {
        if (c->empty()) continue;
        lo = std::min(lo, c->min_degree());
        hi = std::max(hi, c->max_degree());
    }
    for (int j = lo; j <= hi; ++j)
        if (!(integer_homology(x, j) == integer_homology(y, j))) return false;
    return true;
}

bool is_acyclic(const BasedComplex& x) {
    if (x.empty()) return true;
    for (int j = x.min_degree(); j <= x.max_degree(); ++j) {
        HomologyGroup h = integer_homology(x, j);
        if (sgn(h.betti) != 0 || !h.torsion_factors.empty()) return false;
    }
    return true;
}

}  // namespace zrc
