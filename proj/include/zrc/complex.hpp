#ifndef ZRC_COMPLEX_HPP
#define ZRC_COMPLEX_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "zrc/zmat.hpp"

namespace zrc {

struct ValidationReport {
    std::vector<std::string> issues;
    bool ok() const { return issues.empty(); }
    std::string joined() const;
};

/// Bounded based free Z-chain complex.  Degrees outside [min_degree,
/// max_degree] have rank 0.  diff(j) is the matrix of d_j : X_j -> X_{j-1}
/// with columns indexed by the degree-j basis.
class BasedComplex {
public:
    BasedComplex() = default;

    // ranks/labels are indexed lo..lo+ranks.size()-1; diffs maps a degree j to
    // the matrix of d_j.  With check=true, shape and d d = 0 violations throw.
    static BasedComplex make(int lo, std::vector<int> ranks,
                             std::vector<std::vector<std::string>> labels,
                             std::map<int, SpMat> diffs, bool check = true);

    // Convenience: auto-generated labels "<prefix><degree>_<index>".
    static BasedComplex make_auto(int lo, const std::vector<int>& ranks,
                                  std::map<int, SpMat> diffs, const std::string& prefix = "x",
                                  bool check = true);

    bool empty() const { return ranks_.empty(); }
    int min_degree() const { return lo_; }
    int max_degree() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }

    int rank(int j) const;
    const std::vector<std::string>& labels(int j) const;
    SpMat diff(int j) const;  // shaped rank(j-1) x rank(j)

    Int total_rank() const;

    bool operator==(const BasedComplex& rhs) const;
    bool operator!=(const BasedComplex& rhs) const { return !(*this == rhs); }

    // Same ranks and differentials in every degree; labels ignored.
    bool same_shape(const BasedComplex& rhs) const;

    friend ValidationReport validate(const BasedComplex& x);

private:
    int lo_ = 0;
    std::vector<int> ranks_;
    std::vector<std::vector<std::string>> labels_;
    std::map<int, SpMat> diffs_;  // as provided (validate reports shape issues)

    void trim();
};

using ComplexPtr = std::shared_ptr<const BasedComplex>;

inline ComplexPtr share(BasedComplex x) { return std::make_shared<const BasedComplex>(std::move(x)); }

ValidationReport validate(const BasedComplex& x);

// (Sigma^k X)_j = X_{j-k}; each single suspension negates the differential.
BasedComplex suspend(const BasedComplex& x, int k);

BasedComplex direct_sum(const BasedComplex& x, const BasedComplex& y);

// Zero ranks above k, differentials truncated.
BasedComplex skeleton(const BasedComplex& x, int k);

// Max column sum of |entries| of d_j over j <= n (all j when n omitted).
Int complex_norm(const BasedComplex& x, int n);
Int complex_norm(const BasedComplex& x);

}  // namespace zrc

#endif
