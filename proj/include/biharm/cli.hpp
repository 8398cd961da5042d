#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace biharm::cli {

// Batch front end. args excludes the program name. Returns 0 on success,
// 2 on usage errors, 1 on computation errors (diagnostics on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biharm::cli
