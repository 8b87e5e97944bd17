#include "zrc/complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace zrc {

std::string ValidationReport::joined() const {
    std::ostringstream os;
    for (size_t i = 0; i < issues.size(); ++i) {
        if (i) os << "; ";
        os << issues[i];
    }
    return os.str();
}

void BasedComplex::trim() {
    while (!ranks_.empty() && ranks_.back() == 0) {
        diffs_.erase(lo_ + static_cast<int>(ranks_.size()));
        diffs_.erase(lo_ + static_cast<int>(ranks_.size()) - 1);
        ranks_.pop_back();
        labels_.pop_back();
    }
    while (!ranks_.empty() && ranks_.front() == 0) {
        diffs_.erase(lo_);
        diffs_.erase(lo_ + 1);
        ranks_.erase(ranks_.begin());
        labels_.erase(labels_.begin());
        ++lo_;
    }
    if (ranks_.empty()) {
        lo_ = 0;
        diffs_.clear();
        return;
    }
    // Drop zero or out-of-range differentials; keep in-range nonzero shapes.
    for (auto it = diffs_.begin(); it != diffs_.end();) {
        int j = it->first;
        bool in_range = j > min_degree() && j <= max_degree();
        if (!in_range || it->second.is_zero())
            it = diffs_.erase(it);
        else
            ++it;
    }
}

BasedComplex BasedComplex::make(int lo, std::vector<int> ranks,
                                std::vector<std::vector<std::string>> labels,
                                std::map<int, SpMat> diffs, bool check) {
    BasedComplex x;
    x.lo_ = lo;
    x.ranks_ = std::move(ranks);
    x.labels_ = std::move(labels);
    x.diffs_ = std::move(diffs);
    if (x.labels_.size() != x.ranks_.size())
        throw Error("BasedComplex: ranks/labels length mismatch");
    if (check) {
        ValidationReport rep = validate(x);
        if (!rep.ok()) throw Error("invalid chain complex: " + rep.joined());
    }
    x.trim();
    return x;
}

BasedComplex BasedComplex::make_auto(int lo, const std::vector<int>& ranks,
                                     std::map<int, SpMat> diffs, const std::string& prefix,
                                     bool check) {
    std::vector<std::vector<std::string>> labels;
    for (size_t i = 0; i < ranks.size(); ++i) {
        std::vector<std::string> l;
        for (int k = 0; k < ranks[i]; ++k)
            l.push_back(prefix + std::to_string(lo + static_cast<int>(i)) + "_" + std::to_string(k));
        labels.push_back(std::move(l));
    }
    return make(lo, ranks, std::move(labels), std::move(diffs), check);
}

int BasedComplex::rank(int j) const {
    if (empty() || j < lo_ || j > max_degree()) return 0;
    return ranks_[j - lo_];
}

const std::vector<std::string>& BasedComplex::labels(int j) const {
    static const std::vector<std::string> none;
    if (empty() || j < lo_ || j > max_degree()) return none;
    return labels_[j - lo_];
}

SpMat BasedComplex::diff(int j) const {
    auto it = diffs_.find(j);
    if (it != diffs_.end()) return it->second;
    return SpMat::zero(rank(j - 1), rank(j));
}

Int BasedComplex::total_rank() const {
    Int t(0);
    for (int r : ranks_) t += r;
    return t;
}

bool BasedComplex::operator==(const BasedComplex& rhs) const {
    if (lo_ != rhs.lo_ || ranks_ != rhs.ranks_ || labels_ != rhs.labels_) return false;
    return same_shape(rhs);
}

bool BasedComplex::same_shape(const BasedComplex& rhs) const {
    if (empty() != rhs.empty()) return false;
    if (empty()) return true;
    if (lo_ != rhs.lo_ || ranks_ != rhs.ranks_) return false;
    for (int j = lo_; j <= max_degree() + 1; ++j)
        if (diff(j) != rhs.diff(j)) return false;
    return true;
}

ValidationReport validate(const BasedComplex& x) {
    ValidationReport rep;
    if (x.empty()) return rep;
    for (int j = x.min_degree(); j <= x.max_degree(); ++j) {
        if (x.rank(j) < 0) rep.issues.push_back("degree " + std::to_string(j) + ": negative rank");
        const auto& lab = x.labels(j);
        if (static_cast<int>(lab.size()) != x.rank(j))
            rep.issues.push_back("degree " + std::to_string(j) + ": label count != rank");
        std::set<std::string> seen(lab.begin(), lab.end());
        if (seen.size() != lab.size())
            rep.issues.push_back("degree " + std::to_string(j) + ": duplicate basis labels");
    }
    for (const auto& [j, d] : x.diffs_) {
        if (j <= x.min_degree() || j > x.max_degree()) {
            if (!d.is_zero())
                rep.issues.push_back("degree " + std::to_string(j) +
                                     ": nonzero differential outside degree range");
            continue;
        }
        if (d.rows() != x.rank(j - 1) || d.cols() != x.rank(j))
            rep.issues.push_back("degree " + std::to_string(j) +
                                 ": differential dimensions do not match ranks");
    }
    // dd = 0 wherever shapes are consistent
    for (int j = x.min_degree() + 2; j <= x.max_degree(); ++j) {
        SpMat a = x.diff(j - 1), b = x.diff(j);
        if (a.rows() != x.rank(j - 2) || a.cols() != x.rank(j - 1) || b.rows() != x.rank(j - 1) ||
            b.cols() != x.rank(j))
            continue;
        if (!(a * b).is_zero())
            rep.issues.push_back("dd != 0 between degrees " + std::to_string(j) + " and " +
                                 std::to_string(j - 2));
    }
    return rep;
}

BasedComplex suspend(const BasedComplex& x, int k) {
    if (x.empty()) return x;
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, SpMat> diffs;
    int lo = x.min_degree() + k;
    for (int j = x.min_degree(); j <= x.max_degree(); ++j) {
        ranks.push_back(x.rank(j));
        labels.push_back(x.labels(j));
        SpMat d = x.diff(j);
        if (!d.is_zero()) diffs[j + k] = (k % 2 == 0) ? d : -d;
    }
    return BasedComplex::make(lo, std::move(ranks), std::move(labels), std::move(diffs), false);
}

namespace {

// Appends primes to colliding labels so bases stay unique after a sum.
std::vector<std::string> merge_labels(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
    std::set<std::string> seen(a.begin(), a.end());
    std::vector<std::string> out = a;
    for (const auto& l : b) {
        std::string cand = l;
        while (seen.count(cand)) cand += "'";
        seen.insert(cand);
        out.push_back(cand);
    }
    return out;
}

}  // namespace

BasedComplex direct_sum(const BasedComplex& x, const BasedComplex& y) {
    if (x.empty()) return y;
    if (y.empty()) return x;
    int lo = std::min(x.min_degree(), y.min_degree());
    int hi = std::max(x.max_degree(), y.max_degree());
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, SpMat> diffs;
    for (int j = lo; j <= hi; ++j) {
        ranks.push_back(x.rank(j) + y.rank(j));
        labels.push_back(merge_labels(x.labels(j), y.labels(j)));
        if (j > lo) {
            SpMat d = SpMat::block_diag(x.diff(j), y.diff(j));
            if (!d.is_zero()) diffs[j] = std::move(d);
        }
    }
    return BasedComplex::make(lo, std::move(ranks), std::move(labels), std::move(diffs), false);
}

BasedComplex skeleton(const BasedComplex& x, int k) {
    if (x.empty() || k >= x.max_degree()) return x;
    if (k < x.min_degree()) return BasedComplex();
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, SpMat> diffs;
    for (int j = x.min_degree(); j <= k; ++j) {
        ranks.push_back(x.rank(j));
        labels.push_back(x.labels(j));
        SpMat d = x.diff(j);
        if (j > x.min_degree() && !d.is_zero()) diffs[j] = std::move(d);
    }
    return BasedComplex::make(x.min_degree(), std::move(ranks), std::move(labels), std::move(diffs),
                              false);
}

Int complex_norm(const BasedComplex& x, int n) {
    Int best(0);
    for (int j = x.min_degree(); j <= std::min(x.max_degree(), n); ++j) {
        Int v = x.diff(j).l1_norm();
        if (v > best) best = v;
    }
    return best;
}

Int complex_norm(const BasedComplex& x) { return complex_norm(x, x.empty() ? 0 : x.max_degree()); }

}  // namespace zrc
