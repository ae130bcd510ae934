#pragma once

#include "scnp/tensor.hpp"

namespace scnp {

/// Per-pixel softmax across channels, stabilized by max subtraction.
Tensor4 softmax_channels(const Tensor4& z);

/// Applies the softmax Jacobian at every pixel:
/// out_c = yhat_c * (upstream_c - sum_k upstream_k * yhat_k).
Tensor4 softmax_jacobian_apply(const Tensor4& yhat, const Tensor4& upstream);

/// Elementwise logistic.
Tensor4 sigmoid(const Tensor4& z);

/// upstream .* yhat .* (1 - yhat)
Tensor4 sigmoid_grad(const Tensor4& yhat, const Tensor4& upstream);

} // namespace scnp
