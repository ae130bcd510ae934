#include "scnp/pooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scnp {

namespace {

void check_window(int w) {
    require(w >= 1 && w % 2 == 1, "window size must be odd and positive, got " + std::to_string(w));
}

template <bool Min>
std::pair<Tensor4, PoolTrace> window_pool(const Tensor4& t, int w) {
    check_window(w);
    const Shape4 s = t.shape;
    Tensor4 out(s);
    PoolTrace trace{s, std::vector<std::uint32_t>(s.size())};
    const int r = w / 2;
    const int planes = s.b * s.c;
    const std::size_t plane = s.plane();

#pragma omp parallel for schedule(static)
    for (int p = 0; p < planes; ++p) {
        const std::size_t base = p * plane;
        const real* in = t.v.data() + base;
        real* o = out.v.data() + base;
        std::uint32_t* tr = trace.src.data() + base;
        for (int y = 0; y < s.h; ++y) {
            const int y0 = y - r < 0 ? 0 : y - r;
            const int y1 = y + r >= s.h ? s.h - 1 : y + r;
            for (int x = 0; x < s.w; ++x) {
                const int x0 = x - r < 0 ? 0 : x - r;
                const int x1 = x + r >= s.w ? s.w - 1 : x + r;
                // Scan order is increasing flat index, so "keep the first
                // strict winner" implements the lowest-index tie rule.
                std::size_t best_j = static_cast<std::size_t>(y0) * s.w + x0;
                real best = in[best_j];
                for (int yy = y0; yy <= y1; ++yy) {
                    const std::size_t row = static_cast<std::size_t>(yy) * s.w;
                    for (int xx = x0; xx <= x1; ++xx) {
                        const real val = in[row + xx];
                        if (Min ? val < best : val > best) {
                            best = val;
                            best_j = row + xx;
                        }
                    }
                }
                const std::size_t i = static_cast<std::size_t>(y) * s.w + x;
                o[i] = best;
                tr[i] = static_cast<std::uint32_t>(base + best_j);
            }
        }
    }
    return {std::move(out), std::move(trace)};
}

} // namespace

std::pair<Tensor4, PoolTrace> window_min(const Tensor4& t, int w) {
    return window_pool<true>(t, w);
}

std::pair<Tensor4, PoolTrace> window_max(const Tensor4& t, int w) {
    return window_pool<false>(t, w);
}

namespace {

template <bool Min>
real pool_margin(const Tensor4& t, int w) {
    const Shape4 s = t.shape;
    const int r = w / 2;
    real margin = std::numeric_limits<real>::infinity();
    for (int p = 0; p < s.b * s.c; ++p) {
        const real* in = t.v.data() + p * s.plane();
        for (int y = 0; y < s.h; ++y)
            for (int x = 0; x < s.w; ++x) {
                real best = Min ? std::numeric_limits<real>::infinity()
                                : -std::numeric_limits<real>::infinity();
                real second = best;
                for (int yy = std::max(0, y - r); yy <= std::min(s.h - 1, y + r); ++yy)
                    for (int xx = std::max(0, x - r); xx <= std::min(s.w - 1, x + r); ++xx) {
                        const real val = in[static_cast<std::size_t>(yy) * s.w + xx];
                        if (Min ? val < best : val > best) {
                            second = best;
                            best = val;
                        } else if (Min ? val < second : val > second) {
                            second = val;
                        }
                    }
                if (std::isfinite(second)) {
                    const real gap = Min ? second - best : best - second;
                    if (gap < margin) margin = gap;
                }
            }
    }
    return margin;
}

} // namespace

real pool_margin_min(const Tensor4& t, int w) { return pool_margin<true>(t, w); }
real pool_margin_max(const Tensor4& t, int w) { return pool_margin<false>(t, w); }

Tensor4 pool_backward(const PoolTrace& trace, const Tensor4& upstream) {
    if (!(trace.shape == upstream.shape))
        throw std::invalid_argument("pool_backward: trace shape " + trace.shape.str() +
                                    " vs upstream " + upstream.shape.str());
    const Shape4 s = upstream.shape;
    Tensor4 grad(s);
    const int planes = s.b * s.c;
    const std::size_t plane = s.plane();

    // Sources never leave their plane, so planes scatter independently;
    // within a plane the scatter runs in fixed index order.
#pragma omp parallel for schedule(static)
    for (int p = 0; p < planes; ++p) {
        const std::size_t base = p * plane;
        for (std::size_t i = base; i < base + plane; ++i)
            grad.v[trace.src[i]] += upstream.v[i];
    }
    return grad;
}

} // namespace scnp
