#ifndef ZRC_REBUILD_HPP
#define ZRC_REBUILD_HPP

#include <optional>

#include "zrc/htpy.hpp"
#include "zrc/json_io.hpp"

namespace zrc {

enum class RebuildKind { domination, weak, full };

std::string kind_name(RebuildKind k);
RebuildKind kind_from_name(const std::string& s);
// full => weak => domination
bool kind_at_least(RebuildKind k, RebuildKind req);

/// Quality (T, kappa), T and kappa >= 1.  kappa_exact is set when kappa is
/// known as an exact rational; rank inequalities are then checked exactly.
struct Quality {
    Rat T;
    double kappa = 1.0;
    std::optional<Rat> kappa_exact;

    static Quality make(Rat T, double kappa);
    static Quality make_exact(Rat T, Rat kappa);

    double norm_bound() const;  // exp(kappa) * T^kappa
};

struct RankCheckRow {
    int degree;
    Int rk_compressed;  // rk X'_j
    Int rk_source;      // rk X_j
    double rhs;         // kappa T^{-1} rk X_j
    bool exact;
    bool pass;
};

struct NormCheckRow {
    std::string map_name;
    int degree;
    Int value;
    double bound;
    bool pass;
};

struct CertifiedRebuilding {
    HomotopyRetract retract;
    int n = 0;
    RebuildKind kind = RebuildKind::domination;
    Quality quality;
    std::vector<RankCheckRow> rank_ledger;
    std::vector<NormCheckRow> norm_ledger;
};

// Builds the certificate or throws naming the first violated inequality
// (with both sides); borderline comparisons inside the 1e-9 relative guard
// band throw an "indeterminate" error instead of silently certifying.
CertifiedRebuilding check_quality(const HomotopyRetract& retract, int n, const Quality& q,
                                  RebuildKind kind);

// Re-certify the same retract at a different degree bound or weaker kind.
CertifiedRebuilding recheck(const CertifiedRebuilding& cert, int n, RebuildKind kind);

/// S^[0,d]: ranks (d, d) in degrees 0 and 1, d_1(e_i) = v_{i+1 mod d} - v_i.
BasedComplex circle_complex(long d);

// The collapse of S^[0,d] onto S^[0,1]; an n-rebuilding of quality (d, 1).
HomotopyRetract circle_coarse_retract(long d);

// Chunk boundaries 0 = a_0 < ... < a_m = d used by circle_rebuild: chunks of
// ceil(T/2), short tail merged into its predecessor when the result stays
// <= floor(T), otherwise the last two chunks are rebalanced.
std::vector<long> circle_chunks(long d, const Rat& T);

// Full rebuilding (S^[0,d], S^[0,m]) of quality (T, 2), any degree bound.
CertifiedRebuilding circle_rebuild(long d, const Rat& T);

// Block sum; same T, n and kind required; kappa = max(kappa1, kappa2).
CertifiedRebuilding sum_rebuild(const CertifiedRebuilding& r1, const CertifiedRebuilding& r2);

// Mapping-cone constructor: needs rx FULL at degree >= n-1 and ry of the
// resulting kind at degree >= n, same T; f : rx.X -> ry.X.
// kappa = kappa_x + kappa_y + log 3 + max_{j<=n} log_+ ||f_j||.
CertifiedRebuilding cone_rebuild(const CertifiedRebuilding& rx, const CertifiedRebuilding& ry,
                                 const ChainMap& f, int n);

// Composition of weak rebuildings (or dominations): quality (S T, 2 k2 k1).
CertifiedRebuilding compose_rebuild(const CertifiedRebuilding& r1,
                                    const CertifiedRebuilding& r2);

// Conjugates a retract by a chain isomorphism onto a new source complex.
HomotopyRetract transport_retract(const HomotopyRetract& r, const ChainMap& iso,
                                  const ChainMap& iso_inv);

Json certificate_to_json(const CertifiedRebuilding& cert);
// Loads and fully re-verifies (retract identities and all inequalities).
CertifiedRebuilding certificate_from_json(const Json& j);

}  // namespace zrc

#endif
