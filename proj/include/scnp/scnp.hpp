#pragma once

#include <utility>

#include "scnp/pooling.hpp"
#include "scnp/tensor.hpp"

namespace scnp {

/// How a loss consumes the logits: untouched, SCNP-penalized, or both summed.
enum class ScnpMode { Off, ScnpOnly, Joint };

struct ScnpConfig {
    ScnpMode mode = ScnpMode::Off;
    int w = 3;
};

/// Selection record of one SCNP forward pass: the foreground min path, the
/// background max path, and the mask that routed between them.
struct ScnpTrace {
    PoolTrace fg_min;
    PoolTrace bg_max;
    Tensor4 mask;
    int w = 3;
    real kappa; // sentinel; masking realizes kappa = +infinity
};

/// Replaces every logit with the worst value among its same-class window
/// neighbors: min over foreground candidates where y=1, max over background
/// candidates where y=0.  Masking makes cross-class values ineligible.
std::pair<Tensor4, ScnpTrace> scnp_forward(const Tensor4& z, const OneHotMask& y, int w);

/// Exact backward routing: each source position accumulates the upstream
/// gradient of every output position it was propagated to; positions never
/// selected get zero.
Tensor4 scnp_backward(const ScnpTrace& trace, const Tensor4& upstream);

} // namespace scnp
