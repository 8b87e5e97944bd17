#ifndef ZRC_JSON_IO_HPP
#define ZRC_JSON_IO_HPP

#include <json.hpp>

#include "zrc/maps.hpp"

namespace zrc {

using Json = nlohmann::ordered_json;

// {"degrees": [{"degree", "rank", "basis", "differential": [[row, col, "v"]]}]}
// Differential triplets are sorted by (col, row); round-trips are bit-exact.
Json complex_to_json(const BasedComplex& x);
BasedComplex complex_from_json(const Json& j, bool check = true);

Json spmat_to_json(const SpMat& m);
SpMat spmat_from_json(const Json& j, int rows, int cols);

Json chain_map_to_json(const ChainMap& f);
// Reads the components of a map between the two given complexes.
ChainMap chain_map_from_json(const Json& j, ComplexPtr src, ComplexPtr tgt);

Json homotopy_comp_to_json(const std::map<int, SpMat>& comp);
std::map<int, SpMat> homotopy_comp_from_json(const Json& j, const BasedComplex& src,
                                             const BasedComplex& tgt, int degree);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace zrc

#endif
