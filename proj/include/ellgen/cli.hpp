#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ellgen/rational.hpp"

namespace ellgen {

// Exit codes: 0 success, 1 internal error, 2 parse error (JSON or flags),
// 3 validation error, 4 computation error. Reports go to out, diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "0.5+1.2i", "1.0i", "-i", "2", "0.3-0.1j"; throws ParseError.
cplx parse_complex(const std::string& s);

}  // namespace ellgen
