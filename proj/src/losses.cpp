#include "scnp/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scnp/activations.hpp"
#include "scnp/edt.hpp"
#include "scnp/metrics.hpp"

namespace scnp {

namespace {

constexpr real kProbClamp = 1e-7;

real clamp_prob(real p) {
    if (p < kProbClamp) return kProbClamp;
    if (p > 1.0 - kProbClamp) return 1.0 - kProbClamp;
    return p;
}

void check_loss_args(const Tensor4& yhat, const OneHotMask& y, const char* where) {
    require_same_shape(yhat, y.t, where);
}

void check_finite_result(real value, const Tensor4& grad, const char* where) {
    if (!std::isfinite(value) || !all_finite(grad))
        throw NumericalError(std::string(where) + ": non-finite loss or gradient");
}

} // namespace

LossEval ce_loss(const Tensor4& yhat, const OneHotMask& y) {
    check_loss_args(yhat, y, "ce_loss");
    const Shape4 s = yhat.shape;
    const real inv_n = 1.0 / (static_cast<real>(s.b) * s.h * s.w);
    LossEval out{0.0, Tensor4(s)};
    real acc = 0.0;
    for (std::size_t i = 0; i < yhat.size(); ++i) {
        if (y.t.v[i] == 0.0) continue;
        const real p = clamp_prob(yhat.v[i]);
        acc -= std::log(p);
        out.grad_yhat.v[i] = -inv_n / p;
    }
    out.value = acc * inv_n;
    check_finite_result(out.value, out.grad_yhat, "ce_loss");
    return out;
}

LossEval dice_loss(const Tensor4& yhat, const OneHotMask& y, real eps) {
    check_loss_args(yhat, y, "dice_loss");
    const Shape4 s = yhat.shape;
    const std::size_t plane = s.plane();
    const real inv_bc = 1.0 / (static_cast<real>(s.b) * s.c);
    LossEval out{0.0, Tensor4(s)};
    real acc = 0.0;
    for (int p = 0; p < s.b * s.c; ++p) {
        const std::size_t base = p * plane;
        real a = 0.0, u = 0.0;
        for (std::size_t i = base; i < base + plane; ++i) {
            a += y.t.v[i] * yhat.v[i];
            u += yhat.v[i] + y.t.v[i];
        }
        const real denom = u + eps;
        acc += (2.0 * a + eps) / denom;
        const real inv_d2 = 1.0 / (denom * denom);
        for (std::size_t i = base; i < base + plane; ++i)
            out.grad_yhat.v[i] = -inv_bc * (2.0 * y.t.v[i] * denom - (2.0 * a + eps)) * inv_d2;
    }
    out.value = 1.0 - acc * inv_bc;
    check_finite_result(out.value, out.grad_yhat, "dice_loss");
    return out;
}

LossEval cedice_loss(const Tensor4& yhat, const OneHotMask& y, real eps) {
    LossEval ce = ce_loss(yhat, y);
    const LossEval dc = dice_loss(yhat, y, eps);
    ce.value += dc.value;
    for (std::size_t i = 0; i < ce.grad_yhat.size(); ++i) ce.grad_yhat.v[i] += dc.grad_yhat.v[i];
    return ce;
}

LossEval tversky_loss(const Tensor4& yhat, const OneHotMask& y, real beta, real eps) {
    check_loss_args(yhat, y, "tversky_loss");
    require(beta > 0.0 && beta < 1.0, "tversky_loss: beta must be in (0,1)");
    const real alpha = 1.0 - beta;
    const Shape4 s = yhat.shape;
    const std::size_t plane = s.plane();
    const real inv_bc = 1.0 / (static_cast<real>(s.b) * s.c);
    LossEval out{0.0, Tensor4(s)};
    real acc = 0.0;
    for (int p = 0; p < s.b * s.c; ++p) {
        const std::size_t base = p * plane;
        real a = 0.0, fp = 0.0, fn = 0.0;
        for (std::size_t i = base; i < base + plane; ++i) {
            const real yv = y.t.v[i], pv = yhat.v[i];
            a += yv * pv;
            fp += (1.0 - yv) * pv;
            fn += yv * (1.0 - pv);
        }
        const real d = a + alpha * fp + beta * fn + eps;
        acc += (a + eps) / d;
        const real inv_d2 = 1.0 / (d * d);
        // dD/dyhat is alpha for both foreground and background pixels
        for (std::size_t i = base; i < base + plane; ++i)
            out.grad_yhat.v[i] = -inv_bc * (y.t.v[i] * d - (a + eps) * alpha) * inv_d2;
    }
    out.value = 1.0 - acc * inv_bc;
    check_finite_result(out.value, out.grad_yhat, "tversky_loss");
    return out;
}

LossEval focal_loss(const Tensor4& yhat, const OneHotMask& y, real alpha, real gamma) {
    check_loss_args(yhat, y, "focal_loss");
    require(gamma >= 0.0, "focal_loss: gamma must be >= 0");
    const Shape4 s = yhat.shape;
    const real scale = alpha / (static_cast<real>(s.b) * s.h * s.w);
    LossEval out{0.0, Tensor4(s)};
    real acc = 0.0;
    for (std::size_t i = 0; i < yhat.size(); ++i) {
        if (y.t.v[i] == 0.0) continue;
        const real p = clamp_prob(yhat.v[i]);
        const real q = 1.0 - p;
        const real qg = gamma == 0.0 ? 1.0 : std::pow(q, gamma);
        acc -= qg * std::log(p);
        const real dterm = gamma == 0.0
                               ? -1.0 / p
                               : gamma * std::pow(q, gamma - 1.0) * std::log(p) - qg / p;
        out.grad_yhat.v[i] = scale * dterm;
    }
    out.value = acc * scale;
    check_finite_result(out.value, out.grad_yhat, "focal_loss");
    return out;
}

Tensor4 soft_skeleton(const Tensor4& p, int iterations) {
    return soft_skeleton_fwd(p, iterations).first;
}

std::pair<Tensor4, SoftSkelTape> soft_skeleton_fwd(const Tensor4& p, int iterations) {
    require(iterations >= 1, "soft_skeleton: iterations must be >= 1");
    SoftSkelTape tape;
    tape.stages.reserve(iterations + 1);
    Tensor4 skel;
    Tensor4 cur = p;
    for (int t = 0; t <= iterations; ++t) {
        SoftSkelStage st;
        st.p_in = cur;
        auto [er, etr] = window_min(cur, 3);
        auto [op, dtr] = window_max(er, 3);
        st.eroded = std::move(er);
        st.erode_trace = std::move(etr);
        st.dilate_trace = std::move(dtr);
        st.relu_mask = Tensor4(p.shape);
        st.delta = Tensor4(p.shape);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const real r = cur.v[i] - op.v[i];
            st.relu_mask.v[i] = r > 0.0 ? 1.0 : 0.0;
            st.delta.v[i] = r > 0.0 ? r : 0.0;
        }
        if (t == 0) {
            skel = st.delta;
        } else {
            st.skel_before = skel;
            for (std::size_t i = 0; i < skel.size(); ++i)
                skel.v[i] += st.delta.v[i] * (1.0 - skel.v[i]);
        }
        cur = st.eroded;
        tape.stages.push_back(std::move(st));
    }
    return {std::move(skel), std::move(tape)};
}

Tensor4 soft_skeleton_backward(const SoftSkelTape& tape, const Tensor4& upstream) {
    require(!tape.stages.empty(), "soft_skeleton_backward: empty tape");
    require_same_shape(upstream, tape.stages[0].p_in, "soft_skeleton_backward");
    Tensor4 g_skel = upstream;
    Tensor4 g_e(upstream.shape); // gradient flowing into e_t (zero for the last stage)
    Tensor4 g_p(upstream.shape);
    for (int t = static_cast<int>(tape.stages.size()) - 1; t >= 0; --t) {
        const SoftSkelStage& st = tape.stages[t];
        Tensor4 g_delta(upstream.shape);
        if (t > 0) {
            for (std::size_t i = 0; i < g_skel.size(); ++i) {
                g_delta.v[i] = g_skel.v[i] * (1.0 - st.skel_before.v[i]);
                g_skel.v[i] *= 1.0 - st.delta.v[i];
            }
        } else {
            g_delta = g_skel;
        }
        // delta = relu(p - o)
        Tensor4 g_o(upstream.shape);
        g_p.fill(0.0);
        for (std::size_t i = 0; i < g_delta.size(); ++i) {
            const real gr = st.relu_mask.v[i] * g_delta.v[i];
            g_p.v[i] = gr;
            g_o.v[i] = -gr;
        }
        // o = dilate(e); e also feeds the next stage's p (already in g_e)
        Tensor4 ge_total = pool_backward(st.dilate_trace, g_o);
        for (std::size_t i = 0; i < ge_total.size(); ++i) ge_total.v[i] += g_e.v[i];
        // e = erode(p)
        const Tensor4 gp_via_e = pool_backward(st.erode_trace, ge_total);
        for (std::size_t i = 0; i < g_p.size(); ++i) g_p.v[i] += gp_via_e.v[i];
        g_e = g_p; // at stage t-1, p_t = e_{t-1}
    }
    return g_p;
}

namespace {

// Winner margin against candidates rooted at a different source pixel.  Ties
// between values that trace back to the same pixel move together under any
// perturbation and are not kinks.
void pool_margin_rooted(const Tensor4& t, const std::vector<std::uint32_t>& roots, bool take_min,
                        real& acc) {
    const Shape4 s = t.shape;
    const int r = 1; // both soft-skeleton pools use w=3
    for (int p = 0; p < s.b * s.c; ++p) {
        const std::size_t base = p * s.plane();
        for (int y = 0; y < s.h; ++y)
            for (int x = 0; x < s.w; ++x) {
                std::size_t win_j = 0;
                real win = 0.0;
                bool first = true;
                for (int yy = std::max(0, y - r); yy <= std::min(s.h - 1, y + r); ++yy)
                    for (int xx = std::max(0, x - r); xx <= std::min(s.w - 1, x + r); ++xx) {
                        const std::size_t j = base + static_cast<std::size_t>(yy) * s.w + xx;
                        if (first || (take_min ? t.v[j] < win : t.v[j] > win)) {
                            win = t.v[j];
                            win_j = j;
                            first = false;
                        }
                    }
                for (int yy = std::max(0, y - r); yy <= std::min(s.h - 1, y + r); ++yy)
                    for (int xx = std::max(0, x - r); xx <= std::min(s.w - 1, x + r); ++xx) {
                        const std::size_t j = base + static_cast<std::size_t>(yy) * s.w + xx;
                        if (roots[j] == roots[win_j]) continue;
                        const real gap = take_min ? t.v[j] - win : win - t.v[j];
                        if (gap < acc) acc = gap;
                    }
            }
    }
}

} // namespace

void soft_skel_margins(const SoftSkelTape& tape, real& min_pool_gap, real& min_relu_margin,
                       const std::vector<std::uint32_t>* roots0) {
    min_pool_gap = std::numeric_limits<real>::infinity();
    min_relu_margin = std::numeric_limits<real>::infinity();
    require(!tape.stages.empty(), "soft_skel_margins: empty tape");
    const std::size_t n = tape.stages[0].p_in.size();
    std::vector<std::uint32_t> root_p(n), root_e(n);
    if (roots0) {
        require(roots0->size() == n, "soft_skel_margins: roots0 size mismatch");
        root_p = *roots0;
    } else {
        for (std::size_t i = 0; i < n; ++i) root_p[i] = static_cast<std::uint32_t>(i);
    }
    for (const SoftSkelStage& st : tape.stages) {
        pool_margin_rooted(st.p_in, root_p, true, min_pool_gap);
        for (std::size_t i = 0; i < n; ++i) root_e[i] = root_p[st.erode_trace.src[i]];
        pool_margin_rooted(st.eroded, root_e, false, min_pool_gap);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t j = st.dilate_trace.src[i];
            if (root_e[j] == root_p[i]) continue; // p - open is structurally zero
            min_relu_margin = std::min(min_relu_margin, std::abs(st.p_in.v[i] - st.eroded.v[j]));
        }
        root_p = root_e;
    }
}

LossEval cldice_loss(const Tensor4& yhat, const OneHotMask& y, int iters, real lambda, real eps) {
    check_loss_args(yhat, y, "cldice_loss");
    require(iters >= 1, "cldice_loss: iterations must be >= 1");
    require(lambda >= 0.0 && lambda <= 1.0, "cldice_loss: lambda must be in [0,1]");
    const Shape4 s = yhat.shape;
    const std::vector<int> ks = structure_channels(s.c, y.mode);
    require(!ks.empty(), "cldice_loss: no structure channels");

    // gather the structure channels
    const int cf = static_cast<int>(ks.size());
    Tensor4 p_fg(s.b, cf, s.h, s.w), y_fg(s.b, cf, s.h, s.w);
    for (int b = 0; b < s.b; ++b)
        for (int j = 0; j < cf; ++j)
            for (int yy = 0; yy < s.h; ++yy)
                for (int xx = 0; xx < s.w; ++xx) {
                    p_fg.at(b, j, yy, xx) = yhat.at(b, ks[j], yy, xx);
                    y_fg.at(b, j, yy, xx) = y.t.at(b, ks[j], yy, xx);
                }

    auto [s_pred, tape] = soft_skeleton_fwd(p_fg, iters);
    const Tensor4 s_true = soft_skeleton(y_fg, iters);

    real sp = 0.0, spy = 0.0, st = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < s_pred.size(); ++i) {
        sp += s_pred.v[i];
        spy += s_pred.v[i] * y_fg.v[i];
        st += s_true.v[i];
        sty += s_true.v[i] * p_fg.v[i];
    }
    const real tprec = (spy + eps) / (sp + eps);
    const real tsens = (sty + eps) / (st + eps);
    const real hsum = tprec + tsens;
    const real f = 2.0 * tprec * tsens / hsum;
    const real term = 1.0 - f;

    const real df_dtp = 2.0 * tsens * tsens / (hsum * hsum);
    const real df_dts = 2.0 * tprec * tprec / (hsum * hsum);

    // d(term)/dS_pred via Tprec
    Tensor4 g_spred(s_pred.shape);
    const real ctp = -lambda * df_dtp / (sp + eps);
    for (std::size_t i = 0; i < g_spred.size(); ++i)
        g_spred.v[i] = ctp * (y_fg.v[i] - tprec);
    Tensor4 g_pfg = soft_skeleton_backward(tape, g_spred);
    // direct yhat path via Tsens
    const real cts = -lambda * df_dts / (st + eps);
    for (std::size_t i = 0; i < g_pfg.size(); ++i) g_pfg.v[i] += cts * s_true.v[i];

    LossEval dice = dice_loss(yhat, y, eps);
    LossEval out{lambda * term + (1.0 - lambda) * dice.value, Tensor4(s)};
    for (std::size_t i = 0; i < out.grad_yhat.size(); ++i)
        out.grad_yhat.v[i] = (1.0 - lambda) * dice.grad_yhat.v[i];
    for (int b = 0; b < s.b; ++b)
        for (int j = 0; j < cf; ++j)
            for (int yy = 0; yy < s.h; ++yy)
                for (int xx = 0; xx < s.w; ++xx)
                    out.grad_yhat.at(b, ks[j], yy, xx) += g_pfg.at(b, j, yy, xx);
    check_finite_result(out.value, out.grad_yhat, "cldice_loss");
    return out;
}

LossEval skeleton_recall_loss(const Tensor4& yhat, const OneHotMask& y, int radius, real eps) {
    check_loss_args(yhat, y, "skeleton_recall_loss");
    require(radius >= 0, "skeleton_recall_loss: radius must be >= 0");
    const Shape4 s = yhat.shape;
    const std::vector<int> ks = structure_channels(s.c, y.mode);
    require(!ks.empty(), "skeleton_recall_loss: no structure channels");

    // dilated hard skeleton of the ground truth; no gradient flows through it
    Tensor4 sdil(s);
    for (int b = 0; b < s.b; ++b)
        for (int k : ks) {
            BinaryMask m(s.h, s.w);
            for (int yy = 0; yy < s.h; ++yy)
                for (int xx = 0; xx < s.w; ++xx)
                    m.at(yy, xx) = y.t.at(b, k, yy, xx) != 0.0 ? 1 : 0;
            BinaryMask sk = hard_skeleton(m);
            for (int it = 0; it < radius; ++it) sk = dilate(sk, 3);
            for (int yy = 0; yy < s.h; ++yy)
                for (int xx = 0; xx < s.w; ++xx)
                    sdil.at(b, k, yy, xx) = sk.at(yy, xx);
        }

    real sd = 0.0, sdy = 0.0;
    for (std::size_t i = 0; i < sdil.size(); ++i) {
        sd += sdil.v[i];
        sdy += sdil.v[i] * yhat.v[i];
    }
    const real recall = (sdy + eps) / (sd + eps);

    LossEval ce = ce_loss(yhat, y);
    LossEval out{(1.0 - recall) + ce.value, Tensor4(s)};
    const real c = -1.0 / (sd + eps);
    for (std::size_t i = 0; i < out.grad_yhat.size(); ++i)
        out.grad_yhat.v[i] = c * sdil.v[i] + ce.grad_yhat.v[i];
    check_finite_result(out.value, out.grad_yhat, "skeleton_recall_loss");
    return out;
}

Tensor4 region_wise_map(const OneHotMask& y) {
    const Shape4 s = y.shape();
    Tensor4 m(s);
    const std::size_t plane = s.plane();
    std::vector<std::uint8_t> seeds(plane);

    for (int p = 0; p < s.b * s.c; ++p) {
        const std::size_t base = p * plane;
        bool any_fg = false;
        for (std::size_t i = 0; i < plane; ++i) {
            seeds[i] = y.t.v[base + i] != 0.0 ? 1 : 0;
            any_fg |= seeds[i] != 0;
        }
        if (!any_fg) {
            for (std::size_t i = 0; i < plane; ++i) m.v[base + i] = 1.0;
            continue;
        }
        const std::vector<std::int64_t> d2 = squared_edt(seeds, s.h, s.w);
        real dmax = 0.0;
        for (std::size_t i = 0; i < plane; ++i)
            if (!seeds[i]) dmax = std::max(dmax, std::sqrt(static_cast<real>(d2[i])));
        for (std::size_t i = 0; i < plane; ++i) {
            if (seeds[i]) m.v[base + i] = -1.0;
            else m.v[base + i] = std::sqrt(static_cast<real>(d2[i])) / dmax;
        }
    }
    return m;
}

LossEval rw_loss(const Tensor4& yhat, const OneHotMask& y) {
    check_loss_args(yhat, y, "rw_loss");
    const Tensor4 m = region_wise_map(y);
    const real inv_n = 1.0 / static_cast<real>(yhat.size());
    LossEval out{0.0, Tensor4(yhat.shape)};
    real acc = 0.0;
    for (std::size_t i = 0; i < yhat.size(); ++i) {
        acc += yhat.v[i] * m.v[i];
        out.grad_yhat.v[i] = m.v[i] * inv_n;
    }
    out.value = acc * inv_n;
    check_finite_result(out.value, out.grad_yhat, "rw_loss");
    return out;
}

LossEval eval_loss(const LossFn& fn, const Tensor4& yhat, const OneHotMask& y) {
    switch (fn.kind) {
    case LossKind::CE: return ce_loss(yhat, y);
    case LossKind::Dice: return dice_loss(yhat, y, fn.smooth_eps);
    case LossKind::CEDice: return cedice_loss(yhat, y, fn.smooth_eps);
    case LossKind::Tversky: return tversky_loss(yhat, y, fn.tversky_beta, fn.smooth_eps);
    case LossKind::Focal: return focal_loss(yhat, y, fn.focal_alpha, fn.focal_gamma);
    case LossKind::ClDice:
        return cldice_loss(yhat, y, fn.cldice_iters, fn.cldice_lambda, fn.smooth_eps);
    case LossKind::SkelRecall:
        return skeleton_recall_loss(yhat, y, fn.skel_dilation_radius, fn.smooth_eps);
    case LossKind::RWLoss: return rw_loss(yhat, y);
    }
    throw std::logic_error("eval_loss: unknown kind");
}

namespace {

LossResult eval_on_logits(const LossFn& fn, const Tensor4& z, const OneHotMask& y) {
    const Tensor4 yhat = y.mode == MaskMode::Softmax ? softmax_channels(z) : sigmoid(z);
    LossEval ev = eval_loss(fn, yhat, y);
    Tensor4 gz = y.mode == MaskMode::Softmax ? softmax_jacobian_apply(yhat, ev.grad_yhat)
                                             : sigmoid_grad(yhat, ev.grad_yhat);
    return {ev.value, std::move(gz)};
}

} // namespace

LossResult apply_mode(const ScnpConfig& cfg, const LossFn& fn, const Tensor4& z,
                      const OneHotMask& y) {
    if (cfg.mode == ScnpMode::Off) return eval_on_logits(fn, z, y);

    auto [zt, trace] = scnp_forward(z, y, cfg.w);
    LossResult penalized = eval_on_logits(fn, zt, y);
    penalized.grad_z = scnp_backward(trace, penalized.grad_z);
    if (cfg.mode == ScnpMode::ScnpOnly) return penalized;

    LossResult plain = eval_on_logits(fn, z, y);
    plain.value += penalized.value;
    for (std::size_t i = 0; i < plain.grad_z.size(); ++i)
        plain.grad_z.v[i] += penalized.grad_z.v[i];
    return plain;
}

namespace {

const char* kind_name(LossKind k) {
    switch (k) {
    case LossKind::CE: return "ce";
    case LossKind::Dice: return "dice";
    case LossKind::CEDice: return "cedice";
    case LossKind::Tversky: return "tversky";
    case LossKind::Focal: return "focal";
    case LossKind::ClDice: return "cldice";
    case LossKind::SkelRecall: return "skelrecall";
    case LossKind::RWLoss: return "rwloss";
    }
    return "?";
}

} // namespace

std::vector<std::string> loss_kind_names() {
    return {"ce", "dice", "cedice", "tversky", "focal", "cldice", "skelrecall", "rwloss"};
}

LossFn LossFn::parse(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    LossFn fn;
    if (name == "ce") fn.kind = LossKind::CE;
    else if (name == "dice") fn.kind = LossKind::Dice;
    else if (name == "cedice") fn.kind = LossKind::CEDice;
    else if (name == "tversky") fn.kind = LossKind::Tversky;
    else if (name == "focal") fn.kind = LossKind::Focal;
    else if (name == "cldice") fn.kind = LossKind::ClDice;
    else if (name == "skelrecall") fn.kind = LossKind::SkelRecall;
    else if (name == "rwloss") fn.kind = LossKind::RWLoss;
    else {
        std::string valid;
        for (const auto& n : loss_kind_names()) valid += (valid.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown loss '" + name + "'; valid kinds: " + valid);
    }
    if (colon == std::string::npos) return fn;

    std::stringstream ss(spec.substr(colon + 1));
    std::string kv;
    while (std::getline(ss, kv, ',')) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("loss parameter '" + kv + "' is not key=value");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        try {
            if (key == "beta") fn.tversky_beta = std::stod(val);
            else if (key == "alpha") fn.focal_alpha = std::stod(val);
            else if (key == "gamma") fn.focal_gamma = std::stod(val);
            else if (key == "i") fn.cldice_iters = std::stoi(val);
            else if (key == "lambda") fn.cldice_lambda = std::stod(val);
            else if (key == "r") fn.skel_dilation_radius = std::stoi(val);
            else if (key == "eps") fn.smooth_eps = std::stod(val);
            else throw std::invalid_argument("unknown loss parameter '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            throw std::invalid_argument("bad value for loss parameter '" + key + "': " + val);
        }
    }
    require(fn.tversky_beta > 0.0 && fn.tversky_beta < 1.0, "tversky beta must be in (0,1)");
    require(fn.focal_gamma >= 0.0, "focal gamma must be >= 0");
    require(fn.cldice_iters >= 1, "cldice iterations must be >= 1");
    require(fn.smooth_eps > 0.0, "smooth eps must be > 0");
    return fn;
}

std::string LossFn::str() const {
    std::ostringstream os;
    os << kind_name(kind);
    switch (kind) {
    case LossKind::Tversky: os << ":beta=" << tversky_beta; break;
    case LossKind::Focal: os << ":alpha=" << focal_alpha << ",gamma=" << focal_gamma; break;
    case LossKind::ClDice: os << ":i=" << cldice_iters << ",lambda=" << cldice_lambda; break;
    case LossKind::SkelRecall: os << ":r=" << skel_dilation_radius; break;
    default: break;
    }
    return os.str();
}

} // namespace scnp
