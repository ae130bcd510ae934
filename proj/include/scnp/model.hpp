#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scnp/conv.hpp"
#include "scnp/tensor.hpp"

namespace scnp {

/// Three-layer CNN: 3x3 conv (c_in->16) + ReLU, 3x3 conv (16->16) + ReLU,
/// 1x1 conv (16->c_out).  Spatial size is preserved throughout.
struct TinyCnn {
    static constexpr int kHidden = 16;

    int c_in = 1, c_out = 2;
    Tensor4 k1, k2, k3;
    std::vector<real> b1, b2, b3;

    TinyCnn() = default;
    TinyCnn(int c_in_, int c_out_);

    /// He-uniform fan-in init for the kernels, zero biases.
    void init(std::uint64_t seed);

    std::size_t parameter_count() const;
};

struct ForwardCache {
    Tensor4 input;
    Tensor4 a1, a2; // post-ReLU activations
    Tensor4 z1, z2; // pre-ReLU
};

Tensor4 model_forward(const TinyCnn& m, const Tensor4& images, ForwardCache* cache = nullptr);

struct ModelGrads {
    Tensor4 k1, k2, k3;
    std::vector<real> b1, b2, b3;
};

ModelGrads model_backward(const TinyCnn& m, const ForwardCache& cache, const Tensor4& upstream);

/// Checkpoint = directory of TNS1 parameter files plus a "model.json"
/// manifest with layer names, shapes, and a config echo.
void save_checkpoint(const TinyCnn& m, const std::string& dir, const std::string& config_echo);
TinyCnn load_checkpoint(const std::string& dir);

} // namespace scnp
