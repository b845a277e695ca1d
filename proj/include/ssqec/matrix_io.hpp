#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "ssqec/gf2.hpp"

namespace ssqec {

// MacKay alist. Written zero-padded; on read, padding zeros are optional.
void write_alist(std::ostream& os, const SparseBitMatrix& m);
SparseBitMatrix read_alist(std::istream& is);
void save_alist(const std::string& path, const SparseBitMatrix& m);
SparseBitMatrix load_alist(const std::string& path);

// {"rows": r, "cols": c, "row_supports": [[...], ...]}, 0-based.
nlohmann::json matrix_to_json(const SparseBitMatrix& m);
SparseBitMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace ssqec
