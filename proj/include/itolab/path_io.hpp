#pragma once

#include <iosfwd>
#include <string>

#include "itolab/path.hpp"

namespace itolab {

/// Path CSV: header `t,x_1..x_d,jump_1..jump_d`, one row per node, jump
/// columns zero at non-jump nodes. 17 significant digits, so binary64
/// values round-trip bit-exactly.
void write_path_csv(const CadlagPath& path, std::ostream& out);
void write_path_csv(const CadlagPath& path, const std::string& filename);

CadlagPath read_path_csv(std::istream& in);
CadlagPath read_path_csv(const std::string& filename);

}  // namespace itolab
