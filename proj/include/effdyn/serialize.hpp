// serialize.hpp — Text matrix format and JSON report helpers.
//
// Matrix files: first line "rows cols", then one row per line of
// whitespace-separated "re im" pairs.

#pragma once

#include "effdyn/channel.hpp"
#include "effdyn/types.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>

namespace effdyn {

Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);

nlohmann::json to_json(const FidelityReport& report, std::uint64_t seed);

}  // namespace effdyn
