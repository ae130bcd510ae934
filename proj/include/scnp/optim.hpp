#pragma once

#include <vector>

#include "scnp/model.hpp"
#include "scnp/tensor.hpp"

namespace scnp {

/// Classical momentum: v <- mu*v - lr*g; p <- p + v.
void sgd_step(std::vector<real>& params, const std::vector<real>& grads, real lr, real momentum,
              std::vector<real>& velocity);

/// Velocity buffers matching a TinyCnn's parameters.
struct SgdState {
    std::vector<real> vk1, vk2, vk3, vb1, vb2, vb3;
    explicit SgdState(const TinyCnn& m)
        : vk1(m.k1.size(), 0.0), vk2(m.k2.size(), 0.0), vk3(m.k3.size(), 0.0),
          vb1(m.b1.size(), 0.0), vb2(m.b2.size(), 0.0), vb3(m.b3.size(), 0.0) {}
};

void sgd_step_model(TinyCnn& m, const ModelGrads& g, real lr, real momentum, SgdState& state);

} // namespace scnp
