#include "scnp/scnp.hpp"

#include <limits>

namespace scnp {

std::pair<Tensor4, ScnpTrace> scnp_forward(const Tensor4& z, const OneHotMask& y, int w) {
    require_same_shape(z, y.t, "scnp_forward");
    require(w >= 1 && w % 2 == 1, "scnp_forward: w must be odd and positive");

    constexpr real inf = std::numeric_limits<real>::infinity();
    const std::int64_t n = static_cast<std::int64_t>(z.size());
    Tensor4 fg_masked(z.shape), bg_masked(z.shape);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const bool fg = y.t.v[i] != 0.0;
        fg_masked.v[i] = fg ? z.v[i] : inf;
        bg_masked.v[i] = fg ? -inf : z.v[i];
    }

    auto [v1, tr1] = window_min(fg_masked, w);
    auto [v2, tr2] = window_max(bg_masked, w);

    Tensor4 out(z.shape);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out.v[i] = y.t.v[i] != 0.0 ? v1.v[i] : v2.v[i];

    ScnpTrace trace{std::move(tr1), std::move(tr2), y.t, w, inf};
    return {std::move(out), std::move(trace)};
}

Tensor4 scnp_backward(const ScnpTrace& trace, const Tensor4& upstream) {
    if (!(trace.mask.shape == upstream.shape))
        throw std::invalid_argument("scnp_backward: trace shape " + trace.mask.shape.str() +
                                    " vs upstream " + upstream.shape.str());
    const Shape4 s = upstream.shape;
    Tensor4 grad(s);
    const int planes = s.b * s.c;
    const std::size_t plane = s.plane();

#pragma omp parallel for schedule(static)
    for (int p = 0; p < planes; ++p) {
        const std::size_t base = p * plane;
        for (std::size_t i = base; i < base + plane; ++i) {
            const std::uint32_t j =
                trace.mask.v[i] != 0.0 ? trace.fg_min.src[i] : trace.bg_max.src[i];
            grad.v[j] += upstream.v[i];
        }
    }
    return grad;
}

} // namespace scnp
