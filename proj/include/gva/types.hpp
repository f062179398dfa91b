#pragma once

#include <cstdint>
#include <vector>

namespace gva {

using DenseVector = std::vector<double>;
using index_t = std::int32_t;
using nnz_t = std::int64_t;

}  // namespace gva
