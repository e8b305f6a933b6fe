#pragma once

#include <cstdint>

namespace praag {

// Cell budget for linear-algebra intermediates (rows*cols for dense
// eliminations, candidate count for graded quotients). Overridable via the
// PRAAG_MAX_MATRIX environment variable; read once per process.
std::uint64_t max_matrix_cells();

} // namespace praag
