#ifndef ZRC_PIPELINE_HPP
#define ZRC_PIPELINE_HPP

#include "zrc/folner.hpp"

namespace zrc {

struct GradientRow {
    std::string group;
    int j = 0;
    int level = 0;
    Int index;
    std::string field;
    Int betti;
    double log_tors = 0.0;
    Rat betti_per_index;
    double log_tors_per_index = 0.0;
};

/// Per-level samples of Betti and torsion gradients along a residual chain
/// prefix.  Rows are samples; the final row is the last sample, not a limit.
struct GradientReport {
    std::string group;
    std::vector<GradientRow> rows;
};

GradientReport gradient_experiment(const GroupSpec& g, const ResidualChain& chain,
                                   const std::vector<int>& degrees,
                                   const std::vector<FieldSpec>& fields);

void write_gradient_csv(const GradientReport& rep, const std::string& path);
Json gradient_to_json(const GradientReport& rep);

struct BoundCurveRow {
    std::string group;
    int j = 0;
    Rat T;
    int level = 0;
    Int index;
    long d = 1;
    bool certified = false;
    Rat T_prime;
    double kappa = 1.0;
    double bound = 0.0;    // kappa^2 T^{-1} rk_ZG(X_j) (1 + log T)
    double measured = 0.0; // log tors H_j(X_Lambda) / index
    std::string cert_id;
};

struct BoundCurve {
    std::string group;
    std::vector<BoundCurveRow> rows;
};

// Torsion-bound curve for Z^n along the chain: rows are certified when a
// weak rebuilding at (T, kappa) exists at that level (T <= T'); degrees are
// restricted to j <= n-1, where the Gabber-based bound applies.
BoundCurve cwr_bound_curve(int group_rank, const std::vector<int>& degrees,
                           const std::vector<Rat>& T_grid, const ResidualChain& chain,
                           const std::string& cert_dir = "");

void write_bound_curve_csv(const BoundCurve& curve, const std::string& path);
Json bound_curve_to_json(const BoundCurve& curve);

struct BootstrapReport {
    long d = 1;
    Rat T;
    std::vector<Int> betti;            // coinvariant homology of the replaced complex
    std::vector<double> log_torsion;
    bool matches_koszul2 = false;      // homology agrees with the Koszul(2) coinvariants
    long multiplicity = 1;             // copies in the induced-coinvariants decomposition
    std::vector<int> replaced_ranks;   // group-ring ranks of the replaced complex
    std::vector<int> rebuilt_ranks;    // ranks of the rebuilt coinvariant complex
    double kappa = 0.0;
    CertifiedRebuilding cert;
};

// End-to-end concrete instance over Z^2: the line complex with Z x {0}
// stabilisers, replaced by induced Koszul resolutions via a central exact
// lift, rebuilt at level (dZ)^2 from circle rebuildings through the
// mapping-cone constructor.
BootstrapReport bootstrap_demo(long d, const Rat& T);

Json bootstrap_to_json(const BootstrapReport& rep, const std::string& cert_path);

}  // namespace zrc

#endif
