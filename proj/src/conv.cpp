#include "scnp/conv.hpp"

namespace scnp {

namespace {

void check_conv_args(const Tensor4& input, const Tensor4& kernel, std::size_t bias_len) {
    require(kernel.shape.h == kernel.shape.w, "conv2d: kernel must be square");
    const int k = kernel.shape.h;
    require(k == 1 || k == 3, "conv2d: kernel size must be 1 or 3, got " + std::to_string(k));
    require(kernel.shape.c == input.shape.c,
            "conv2d: kernel c_in " + std::to_string(kernel.shape.c) + " vs input channels " +
                std::to_string(input.shape.c));
    require(bias_len == static_cast<std::size_t>(kernel.shape.b),
            "conv2d: bias length must equal c_out");
}

} // namespace

Tensor4 conv2d(const Tensor4& input, const Tensor4& kernel, const std::vector<real>& bias) {
    check_conv_args(input, kernel, bias.size());
    const Shape4 s = input.shape;
    const int cout = kernel.shape.b, cin = kernel.shape.c, k = kernel.shape.h, pad = k / 2;
    Tensor4 out(s.b, cout, s.h, s.w);

#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < s.b; ++b) {
        for (int oc = 0; oc < cout; ++oc) {
            real* o = out.v.data() + out.idx(b, oc, 0, 0);
            for (std::size_t i = 0; i < s.plane(); ++i) o[i] = bias[oc];
            for (int ic = 0; ic < cin; ++ic) {
                const real* in = input.v.data() + input.idx(b, ic, 0, 0);
                const real* kk = kernel.v.data() + kernel.idx(oc, ic, 0, 0);
                for (int ky = 0; ky < k; ++ky) {
                    for (int kx = 0; kx < k; ++kx) {
                        const real wv = kk[ky * k + kx];
                        const int dy = ky - pad, dx = kx - pad;
                        const int y0 = dy < 0 ? -dy : 0;
                        const int y1 = dy > 0 ? s.h - dy : s.h;
                        const int x0 = dx < 0 ? -dx : 0;
                        const int x1 = dx > 0 ? s.w - dx : s.w;
                        for (int y = y0; y < y1; ++y) {
                            const real* irow = in + static_cast<std::size_t>(y + dy) * s.w + dx;
                            real* orow = o + static_cast<std::size_t>(y) * s.w;
                            for (int x = x0; x < x1; ++x) orow[x] += wv * irow[x];
                        }
                    }
                }
            }
        }
    }
    return out;
}

ConvGrads conv2d_backward(const Tensor4& input, const Tensor4& kernel, const Tensor4& upstream) {
    check_conv_args(input, kernel, static_cast<std::size_t>(kernel.shape.b));
    require(upstream.shape.b == input.shape.b && upstream.shape.c == kernel.shape.b &&
                upstream.shape.h == input.shape.h && upstream.shape.w == input.shape.w,
            "conv2d_backward: upstream shape " + upstream.shape.str() + " does not match");

    const Shape4 s = input.shape;
    const int cout = kernel.shape.b, cin = kernel.shape.c, k = kernel.shape.h, pad = k / 2;
    ConvGrads g{Tensor4(s), Tensor4(kernel.shape), std::vector<real>(cout, 0.0)};

    // input gradient: correlate upstream with the kernel flipped in (ky,kx)
#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < s.b; ++b) {
        for (int ic = 0; ic < cin; ++ic) {
            real* gi = g.input.v.data() + g.input.idx(b, ic, 0, 0);
            for (int oc = 0; oc < cout; ++oc) {
                const real* up = upstream.v.data() + upstream.idx(b, oc, 0, 0);
                const real* kk = kernel.v.data() + kernel.idx(oc, ic, 0, 0);
                for (int ky = 0; ky < k; ++ky) {
                    for (int kx = 0; kx < k; ++kx) {
                        const real wv = kk[ky * k + kx];
                        const int dy = pad - ky, dx = pad - kx;
                        const int y0 = dy < 0 ? -dy : 0;
                        const int y1 = dy > 0 ? s.h - dy : s.h;
                        const int x0 = dx < 0 ? -dx : 0;
                        const int x1 = dx > 0 ? s.w - dx : s.w;
                        for (int y = y0; y < y1; ++y) {
                            const real* urow = up + static_cast<std::size_t>(y + dy) * s.w + dx;
                            real* grow = gi + static_cast<std::size_t>(y) * s.w;
                            for (int x = x0; x < x1; ++x) grow[x] += wv * urow[x];
                        }
                    }
                }
            }
        }
    }

    // kernel gradient
#pragma omp parallel for collapse(2) schedule(static)
    for (int oc = 0; oc < cout; ++oc) {
        for (int ic = 0; ic < cin; ++ic) {
            real* gk = g.kernel.v.data() + g.kernel.idx(oc, ic, 0, 0);
            for (int b = 0; b < s.b; ++b) {
                const real* up = upstream.v.data() + upstream.idx(b, oc, 0, 0);
                const real* in = input.v.data() + input.idx(b, ic, 0, 0);
                for (int ky = 0; ky < k; ++ky) {
                    for (int kx = 0; kx < k; ++kx) {
                        const int dy = ky - pad, dx = kx - pad;
                        const int y0 = dy < 0 ? -dy : 0;
                        const int y1 = dy > 0 ? s.h - dy : s.h;
                        const int x0 = dx < 0 ? -dx : 0;
                        const int x1 = dx > 0 ? s.w - dx : s.w;
                        real acc = 0.0;
                        for (int y = y0; y < y1; ++y) {
                            const real* irow = in + static_cast<std::size_t>(y + dy) * s.w + dx;
                            const real* urow = up + static_cast<std::size_t>(y) * s.w;
                            // simd reduction: fixed reassociation independent
                            // of thread count, so results stay reproducible
                            real row_acc = 0.0;
#pragma omp simd reduction(+ : row_acc)
                            for (int x = x0; x < x1; ++x) row_acc += urow[x] * irow[x];
                            acc += row_acc;
                        }
                        gk[ky * k + kx] += acc;
                    }
                }
            }
        }
    }

    for (int oc = 0; oc < cout; ++oc) {
        real acc = 0.0;
        for (int b = 0; b < s.b; ++b) {
            const real* up = upstream.v.data() + upstream.idx(b, oc, 0, 0);
            for (std::size_t i = 0; i < s.plane(); ++i) acc += up[i];
        }
        g.bias[oc] = acc;
    }
    return g;
}

} // namespace scnp
