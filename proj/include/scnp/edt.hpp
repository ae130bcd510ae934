#pragma once

#include <cstdint>
#include <vector>

namespace scnp {

/// Exact squared Euclidean distance transform on an h-by-w grid: for every
/// cell, the squared distance to the nearest nonzero seed cell.  Two-pass
/// separable (columns, then 1-D lower envelopes per row).  Cells are INT64_MAX
/// when there is no seed at all.
std::vector<std::int64_t> squared_edt(const std::vector<std::uint8_t>& seeds, int h, int w);

} // namespace scnp
