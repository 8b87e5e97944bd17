#include "zrc/json_io.hpp"

#include <fstream>

namespace zrc {

Json spmat_to_json(const SpMat& m) {
    Json out = Json::array();
    for (int c = 0; c < m.cols(); ++c)
        for (const auto& [r, v] : m.column(c)) out.push_back(Json::array({r, c, v.get_str()}));
    return out;
}

SpMat spmat_from_json(const Json& j, int rows, int cols) {
    SpMat m(rows, cols);
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 3) throw Error("bad differential triplet");
        int r = t[0].get<int>(), c = t[1].get<int>();
        Int v(t[2].get<std::string>());
        m.set_entry(r, c, v);
    }
    return m;
}

Json complex_to_json(const BasedComplex& x) {
    Json degrees = Json::array();
    if (!x.empty()) {
        for (int j = x.min_degree(); j <= x.max_degree(); ++j) {
            Json d;
            d["degree"] = j;
            d["rank"] = x.rank(j);
            d["basis"] = x.labels(j);
            d["differential"] = spmat_to_json(x.diff(j));
            degrees.push_back(std::move(d));
        }
    }
    Json out;
    out["degrees"] = std::move(degrees);
    return out;
}

BasedComplex complex_from_json(const Json& j, bool check) {
    if (!j.contains("degrees")) throw Error("complex JSON: missing \"degrees\"");
    const Json& degs = j["degrees"];
    if (degs.empty()) return BasedComplex();
    int lo = degs.front()["degree"].get<int>();
    std::vector<int> ranks;
    std::vector<std::vector<std::string>> labels;
    std::map<int, SpMat> diffs;
    int expect = lo;
    int prev_rank = 0;
    for (const auto& d : degs) {
        int deg = d["degree"].get<int>();
        if (deg != expect) throw Error("complex JSON: degrees must be consecutive ascending");
        ++expect;
        int rank = d["rank"].get<int>();
        ranks.push_back(rank);
        labels.push_back(d["basis"].get<std::vector<std::string>>());
        SpMat m = spmat_from_json(d["differential"], deg == lo ? 0 : prev_rank, rank);
        if (!m.is_zero()) diffs[deg] = std::move(m);
        prev_rank = rank;
    }
    return BasedComplex::make(lo, std::move(ranks), std::move(labels), std::move(diffs), check);
}

Json chain_map_to_json(const ChainMap& f) {
    Json comps = Json::array();
    for (const auto& [j, m] : f.comp) {
        if (m.is_zero()) continue;
        Json c;
        c["degree"] = j;
        c["matrix"] = spmat_to_json(m);
        comps.push_back(std::move(c));
    }
    Json out;
    out["components"] = std::move(comps);
    return out;
}

ChainMap chain_map_from_json(const Json& j, ComplexPtr src, ComplexPtr tgt) {
    ChainMap f{std::move(src), std::move(tgt), {}};
    for (const auto& c : j.at("components")) {
        int deg = c["degree"].get<int>();
        f.set(deg, spmat_from_json(c["matrix"], f.tgt->rank(deg), f.src->rank(deg)));
    }
    return f;
}

Json homotopy_comp_to_json(const std::map<int, SpMat>& comp) {
    Json comps = Json::array();
    for (const auto& [j, m] : comp) {
        if (m.is_zero()) continue;
        Json c;
        c["degree"] = j;
        c["matrix"] = spmat_to_json(m);
        comps.push_back(std::move(c));
    }
    Json out;
    out["components"] = std::move(comps);
    return out;
}

std::map<int, SpMat> homotopy_comp_from_json(const Json& j, const BasedComplex& src,
                                             const BasedComplex& tgt, int degree) {
    std::map<int, SpMat> comp;
    for (const auto& c : j.at("components")) {
        int deg = c["degree"].get<int>();
        comp[deg] = spmat_from_json(c["matrix"], tgt.rank(deg + degree), src.rank(deg));
    }
    return comp;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace zrc
