#include "scnp/optim.hpp"

namespace scnp {

void sgd_step(std::vector<real>& params, const std::vector<real>& grads, real lr, real momentum,
              std::vector<real>& velocity) {
    require(params.size() == grads.size() && params.size() == velocity.size(),
            "sgd_step: size mismatch");
    require(lr > 0.0, "sgd_step: lr must be positive");
    require(momentum >= 0.0 && momentum < 1.0, "sgd_step: momentum must be in [0,1)");
    for (std::size_t i = 0; i < params.size(); ++i) {
        velocity[i] = momentum * velocity[i] - lr * grads[i];
        params[i] += velocity[i];
    }
}

void sgd_step_model(TinyCnn& m, const ModelGrads& g, real lr, real momentum, SgdState& s) {
    sgd_step(m.k1.v, g.k1.v, lr, momentum, s.vk1);
    sgd_step(m.k2.v, g.k2.v, lr, momentum, s.vk2);
    sgd_step(m.k3.v, g.k3.v, lr, momentum, s.vk3);
    sgd_step(m.b1, g.b1, lr, momentum, s.vb1);
    sgd_step(m.b2, g.b2, lr, momentum, s.vb2);
    sgd_step(m.b3, g.b3, lr, momentum, s.vb3);
}

} // namespace scnp
