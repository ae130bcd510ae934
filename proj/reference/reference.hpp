#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "scnp/metrics.hpp"
#include "scnp/pooling.hpp"
#include "scnp/tensor.hpp"

// Serial reference implementations, kept independent of the library's kernel
// paths.  Tests check the kernels against these; the benchmark target compares
// their speed.
namespace scnp::ref {

/// Nested-loop window scan with the lowest-flat-index tie rule.
std::pair<Tensor4, PoolTrace> window_scan(const Tensor4& t, int w, bool take_min);

struct ScnpScanResult {
    Tensor4 out;
    std::vector<std::uint32_t> src; // winning source per position
};

/// Direct per-pixel evaluation of the same-class neighbor penalization: min
/// over same-class window values on foreground, max on background.
ScnpScanResult scnp_scan(const Tensor4& z, const Tensor4& mask, int w);

/// BFS flood-fill component count.
int flood_fill_count(const BinaryMask& mask, Connectivity conn);

/// O(N^2) nearest-seed squared distances.
std::vector<std::int64_t> edt_bruteforce(const std::vector<std::uint8_t>& seeds, int h, int w);

/// Area-weighted roundness score with each component's outer perimeter counted
/// by crack following: walk the boundary between foreground and the outside,
/// counting unit edges.
double roundness_by_boundary_walk(const BinaryMask& mask);

} // namespace scnp::ref
