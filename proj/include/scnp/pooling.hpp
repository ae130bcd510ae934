#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "scnp/tensor.hpp"

namespace scnp {

/// For each output position, the flat index of the window element whose value
/// was selected.  Windows are spatial, so a recorded source always lies in the
/// same (batch, channel) plane as its output.
struct PoolTrace {
    Shape4 shape;
    std::vector<std::uint32_t> src;
};

/// Sliding-window minimum, stride 1, output size equals input size.  Border
/// windows are clipped to valid pixels.  Ties go to the lowest flat index.
std::pair<Tensor4, PoolTrace> window_min(const Tensor4& t, int w);

/// Mirror of window_min with max selection and the same tie rule.
std::pair<Tensor4, PoolTrace> window_max(const Tensor4& t, int w);

/// Routes upstream gradients back to the selected sources: grad[j] is the sum
/// of upstream over all output positions whose trace points at j.
Tensor4 pool_backward(const PoolTrace& trace, const Tensor4& upstream);

/// Smallest winner margin (runner-up minus winner for min, winner minus
/// runner-up for max) over all windows; +inf when every window holds a single
/// candidate.  Zero means a tie.
real pool_margin_min(const Tensor4& t, int w);
real pool_margin_max(const Tensor4& t, int w);

} // namespace scnp
