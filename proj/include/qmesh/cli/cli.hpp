#pragma once

#include <ostream>

namespace qmesh::cli {

/// Exit codes: 0 success, 1 usage or configuration error, 2 failed verification.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qmesh::cli
