#include "scnp/activations.hpp"

#include <cmath>

namespace scnp {

Tensor4 softmax_channels(const Tensor4& z) {
    require(z.shape.c >= 2, "softmax_channels: needs at least 2 channels");
    const Shape4 s = z.shape;
    Tensor4 out(s);
    const std::size_t plane = s.plane();
    const std::size_t cstride = plane;

#pragma omp parallel for schedule(static)
    for (int b = 0; b < s.b; ++b) {
        const std::size_t base = static_cast<std::size_t>(b) * s.c * plane;
        for (std::size_t i = 0; i < plane; ++i) {
            real m = z.v[base + i];
            for (int c = 1; c < s.c; ++c) {
                real x = z.v[base + c * cstride + i];
                if (x > m) m = x;
            }
            real sum = 0.0;
            for (int c = 0; c < s.c; ++c) {
                real e = std::exp(z.v[base + c * cstride + i] - m);
                out.v[base + c * cstride + i] = e;
                sum += e;
            }
            const real inv = 1.0 / sum;
            for (int c = 0; c < s.c; ++c) out.v[base + c * cstride + i] *= inv;
        }
    }
    return out;
}

Tensor4 softmax_jacobian_apply(const Tensor4& yhat, const Tensor4& upstream) {
    require_same_shape(yhat, upstream, "softmax_jacobian_apply");
    const Shape4 s = yhat.shape;
    Tensor4 out(s);
    const std::size_t plane = s.plane();

#pragma omp parallel for schedule(static)
    for (int b = 0; b < s.b; ++b) {
        const std::size_t base = static_cast<std::size_t>(b) * s.c * plane;
        for (std::size_t i = 0; i < plane; ++i) {
            real dot = 0.0;
            for (int c = 0; c < s.c; ++c)
                dot += upstream.v[base + c * plane + i] * yhat.v[base + c * plane + i];
            for (int c = 0; c < s.c; ++c) {
                const std::size_t e = base + c * plane + i;
                out.v[e] = yhat.v[e] * (upstream.v[e] - dot);
            }
        }
    }
    return out;
}

Tensor4 sigmoid(const Tensor4& z) {
    Tensor4 out(z.shape);
    const std::int64_t n = static_cast<std::int64_t>(z.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out.v[i] = 1.0 / (1.0 + std::exp(-z.v[i]));
    return out;
}

Tensor4 sigmoid_grad(const Tensor4& yhat, const Tensor4& upstream) {
    require_same_shape(yhat, upstream, "sigmoid_grad");
    Tensor4 out(yhat.shape);
    const std::int64_t n = static_cast<std::int64_t>(yhat.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out.v[i] = upstream.v[i] * yhat.v[i] * (1.0 - yhat.v[i]);
    return out;
}

} // namespace scnp
