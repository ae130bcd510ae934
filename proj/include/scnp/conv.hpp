#pragma once

#include <vector>

#include "scnp/tensor.hpp"

namespace scnp {

/// 2-D cross-correlation, stride 1, zero padding k/2 so the spatial size is
/// preserved.  kernel shape is (c_out, c_in, k, k) with k in {1, 3}.
Tensor4 conv2d(const Tensor4& input, const Tensor4& kernel, const std::vector<real>& bias);

struct ConvGrads {
    Tensor4 input;
    Tensor4 kernel;
    std::vector<real> bias;
};

ConvGrads conv2d_backward(const Tensor4& input, const Tensor4& kernel, const Tensor4& upstream);

} // namespace scnp
