#pragma once

// Command-line front end. cli_run is the whole CLI behind main(), callable
// from tests. Exit codes: 0 success (including fits that record divergence),
// 1 usage error, 2 data error, 3 gradcheck failure.

#include <string>
#include <vector>

namespace gva {

int cli_run(const std::vector<std::string>& args);

}  // namespace gva
