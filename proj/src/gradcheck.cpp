#include "scnp/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "scnp/activations.hpp"
#include "scnp/metrics.hpp"
#include "scnp/rng.hpp"

namespace scnp {

namespace {

constexpr int kH = 8, kW = 8, kC = 2;
constexpr real kFdEps = 1e-3;
// a 1e-3 logit probe moves any probability by at most 2.5e-4; cross-root
// margins above 6.5e-4 guarantee no selection switch inside the probe interval
constexpr real kMinPoolGap = 6.5e-4;
constexpr real kMinReluMargin = 6.5e-4;

// Logits whose values within each plane form a jittered grid: pairwise gaps
// stay above half the grid step, so pooling selections cannot flip under the
// probe, while the jitter keeps cross-pixel logit differences (and therefore
// probabilities) free of exact collisions.
Tensor4 make_logits(Rng& rng, int c) {
    Tensor4 z(1, c, kH, kW);
    const std::size_t plane = z.shape.plane();
    const real step = 1.2 / static_cast<real>(plane - 1); // ~0.019
    for (int k = 0; k < c; ++k) {
        std::vector<std::size_t> perm(plane);
        for (std::size_t i = 0; i < plane; ++i) perm[i] = i;
        rng.shuffle(perm);
        const real offset = rng.uniform(-0.05, 0.05);
        for (std::size_t i = 0; i < plane; ++i)
            z.v[k * plane + i] = static_cast<real>(perm[i]) * step - 0.6 + offset +
                                 rng.uniform(0.0, step * 0.25);
    }
    return z;
}

OneHotMask make_mask(Rng& rng, int c, MaskMode mode) {
    // blobby foreground from a few random bars and disks
    Tensor4 m(1, c, kH, kW);
    auto fill_plane = [&](int) {
        std::vector<std::uint8_t> fg(kH * kW, 0);
        const int n_blobs = 2 + static_cast<int>(rng.uniform_int(2));
        for (int b = 0; b < n_blobs; ++b) {
            const int cy = static_cast<int>(rng.uniform_int(kH));
            const int cx = static_cast<int>(rng.uniform_int(kW));
            const int r = 1 + static_cast<int>(rng.uniform_int(2));
            for (int y = std::max(0, cy - r); y <= std::min(kH - 1, cy + r); ++y)
                for (int x = std::max(0, cx - r); x <= std::min(kW - 1, cx + r); ++x)
                    if ((y - cy) * (y - cy) + (x - cx) * (x - cx) <= r * r)
                        fg[y * kW + x] = 1;
        }
        return fg;
    };
    if (mode == MaskMode::Softmax) {
        const std::vector<std::uint8_t> fg = fill_plane(1);
        for (int y = 0; y < kH; ++y)
            for (int x = 0; x < kW; ++x) {
                const int k = fg[y * kW + x] ? 1 : 0;
                m.at(0, k, y, x) = 1.0;
            }
    } else {
        for (int k = 0; k < c; ++k) {
            const std::vector<std::uint8_t> fg = fill_plane(k);
            for (int y = 0; y < kH; ++y)
                for (int x = 0; x < kW; ++x) m.at(0, k, y, x) = fg[y * kW + x] ? 1.0 : 0.0;
        }
    }
    return OneHotMask(std::move(m), mode);
}

bool plane_nonempty_both_ways(const OneHotMask& y) {
    const Shape4 s = y.shape();
    for (int k = 0; k < s.c; ++k) {
        std::size_t ones = 0;
        for (std::size_t i = 0; i < s.plane(); ++i) ones += y.t.v[k * s.plane() + i] != 0.0;
        if (ones < 4 || ones > s.plane() - 4) return false;
    }
    return true;
}

// Margins of the soft-skeleton stages the clDice path will differentiate
// through, probed on the same activations the loss will see.  After SCNP,
// distinct pixels can carry exactly equal probabilities because they selected
// the same logit sources; such pixels share a dependency root and their ties
// are structural, not kinks.
void audit_cldice(const LossFn& fn, const ScnpConfig& cfg, const Tensor4& z, const OneHotMask& y,
                  real& pool_gap, real& relu_margin) {
    pool_gap = std::numeric_limits<real>::infinity();
    relu_margin = std::numeric_limits<real>::infinity();
    auto probe = [&](const Tensor4& logits, const ScnpTrace* trace) {
        const Tensor4 yhat =
            y.mode == MaskMode::Softmax ? softmax_channels(logits) : sigmoid(logits);
        const Shape4 s = yhat.shape;
        const std::vector<int> ks = structure_channels(s.c, y.mode);
        const int cf = static_cast<int>(ks.size());
        Tensor4 p_fg(s.b, cf, s.h, s.w);
        std::vector<std::uint32_t> roots(p_fg.size());
        std::map<std::vector<std::uint32_t>, std::uint32_t> rep;
        for (int b = 0; b < s.b; ++b)
            for (int j = 0; j < cf; ++j)
                for (int yy = 0; yy < s.h; ++yy)
                    for (int xx = 0; xx < s.w; ++xx) {
                        const std::size_t e = p_fg.idx(b, j, yy, xx);
                        p_fg.v[e] = yhat.at(b, ks[j], yy, xx);
                        std::vector<std::uint32_t> key;
                        if (!trace) {
                            // plain activation: each pixel is its own root,
                            // shared across fg channels of a softmax pixel
                            key = {static_cast<std::uint32_t>(
                                       y.mode == MaskMode::Softmax
                                           ? yhat.idx(b, 0, yy, xx)
                                           : yhat.idx(b, ks[j], yy, xx))};
                        } else if (y.mode == MaskMode::Softmax) {
                            for (int c = 0; c < s.c; ++c) {
                                const std::size_t i = yhat.idx(b, c, yy, xx);
                                key.push_back(y.t.v[i] != 0.0 ? trace->fg_min.src[i]
                                                              : trace->bg_max.src[i]);
                            }
                        } else {
                            const std::size_t i = yhat.idx(b, ks[j], yy, xx);
                            key = {y.t.v[i] != 0.0 ? trace->fg_min.src[i]
                                                   : trace->bg_max.src[i]};
                        }
                        const auto [it, inserted] =
                            rep.try_emplace(std::move(key), static_cast<std::uint32_t>(e));
                        roots[e] = it->second;
                    }
        auto [skel, tape] = soft_skeleton_fwd(p_fg, fn.cldice_iters);
        (void)skel;
        real pg, rm;
        soft_skel_margins(tape, pg, rm, &roots);
        pool_gap = std::min(pool_gap, pg);
        relu_margin = std::min(relu_margin, rm);
    };
    if (cfg.mode != ScnpMode::ScnpOnly) probe(z, nullptr);
    if (cfg.mode != ScnpMode::Off) {
        auto [zt, trace] = scnp_forward(z, y, cfg.w);
        probe(zt, &trace);
    }
}

} // namespace

real gradcheck_tolerance(const LossFn& fn) {
    return fn.kind == LossKind::ClDice ? 1e-3 : 1e-4;
}

GradcheckResult gradcheck(const LossFn& fn, const ScnpConfig& cfg, MaskMode mode,
                          std::uint64_t seed) {
    GradcheckResult res;
    Tensor4 z;
    OneHotMask y;
    bool ok = false;
    res.draws = 0;
    std::uint64_t draw_seed = substream(seed, stream::gradcheck);
    for (int draw = 0; draw < 512 && !ok; ++draw, ++draw_seed) {
        ++res.draws;
        Rng rng(draw_seed);
        y = make_mask(rng, kC, mode);
        if (!plane_nonempty_both_ways(y)) continue;
        z = make_logits(rng, kC);
        res.pool_gap = std::numeric_limits<real>::infinity();
        res.relu_margin = std::numeric_limits<real>::infinity();
        if (fn.kind == LossKind::ClDice) {
            audit_cldice(fn, cfg, z, y, res.pool_gap, res.relu_margin);
            if (res.pool_gap < kMinPoolGap || res.relu_margin < kMinReluMargin) continue;
        }
        ok = true;
    }
    if (!ok) throw NumericalError("gradcheck: could not draw a tie-free fixture");

    const LossResult base = apply_mode(cfg, fn, z, y);
    res.max_rel_err = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const real saved = z.v[i];
        z.v[i] = saved + kFdEps;
        const real lp = apply_mode(cfg, fn, z, y).value;
        z.v[i] = saved - kFdEps;
        const real lm = apply_mode(cfg, fn, z, y).value;
        z.v[i] = saved;
        const real numeric = (lp - lm) / (2.0 * kFdEps);
        const real analytic = base.grad_z.v[i];
        const real denom = std::max({std::abs(analytic), std::abs(numeric), real(1e-7)});
        const real rel = std::abs(analytic - numeric) / denom;
        if (rel > res.max_rel_err) {
            res.max_rel_err = rel;
            res.worst_index = i;
            res.analytic = analytic;
            res.numeric = numeric;
        }
    }
    return res;
}

} // namespace scnp
