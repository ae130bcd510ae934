#pragma once

#include <string>
#include <utility>
#include <vector>

#include "scnp/pooling.hpp"
#include "scnp/scnp.hpp"
#include "scnp/tensor.hpp"

namespace scnp {

enum class LossKind { CE, Dice, CEDice, Tversky, Focal, ClDice, SkelRecall, RWLoss };

/// Loss selector plus per-kind hyper-parameters.  Parsed from the CLI grammar
/// "name[:key=value,...]", e.g. "tversky:beta=0.7" or "cldice:i=4,lambda=0.5".
struct LossFn {
    LossKind kind = LossKind::CEDice;
    real tversky_beta = 0.7;
    real focal_alpha = 1.0;
    real focal_gamma = 2.0;
    int cldice_iters = 4;
    real cldice_lambda = 0.5;
    int skel_dilation_radius = 2;
    real smooth_eps = 1e-5;

    static LossFn parse(const std::string& spec);
    std::string str() const;
};

std::vector<std::string> loss_kind_names();

/// Scalar loss value and its gradient with respect to the raw logits.
struct LossResult {
    real value = 0.0;
    Tensor4 grad_z;
};

/// Loss value and gradient with respect to the normalized predictions.
struct LossEval {
    real value = 0.0;
    Tensor4 grad_yhat;
};

LossEval ce_loss(const Tensor4& yhat, const OneHotMask& y);
LossEval dice_loss(const Tensor4& yhat, const OneHotMask& y, real eps);
LossEval cedice_loss(const Tensor4& yhat, const OneHotMask& y, real eps);
LossEval tversky_loss(const Tensor4& yhat, const OneHotMask& y, real beta, real eps);
LossEval focal_loss(const Tensor4& yhat, const OneHotMask& y, real alpha, real gamma);
LossEval cldice_loss(const Tensor4& yhat, const OneHotMask& y, int iters, real lambda, real eps);
LossEval skeleton_recall_loss(const Tensor4& yhat, const OneHotMask& y, int radius, real eps);
LossEval rw_loss(const Tensor4& yhat, const OneHotMask& y);

LossEval eval_loss(const LossFn& fn, const Tensor4& yhat, const OneHotMask& y);

struct SoftSkelStage {
    PoolTrace erode_trace;  // e_t = erode(p_t)
    PoolTrace dilate_trace; // o_t = dilate(e_t)
    Tensor4 p_in;           // p_t
    Tensor4 eroded;         // e_t (also the next stage's p)
    Tensor4 relu_mask;      // 1 where p_t - o_t > 0
    Tensor4 delta;          // relu(p_t - o_t)
    Tensor4 skel_before;    // skeleton entering this stage (empty at stage 0)
};

struct SoftSkelTape {
    std::vector<SoftSkelStage> stages;
};

/// Iterative morphological soft skeleton: the opening residues of repeated
/// erosions, accumulated into [0,1].
Tensor4 soft_skeleton(const Tensor4& p, int iterations);

std::pair<Tensor4, SoftSkelTape> soft_skeleton_fwd(const Tensor4& p, int iterations);
Tensor4 soft_skeleton_backward(const SoftSkelTape& tape, const Tensor4& upstream);

/// Smallest pooling winner margin and relu margin across all tape stages,
/// counting only gaps between values with different dependency roots (values
/// sharing a root move together under perturbation and cannot create kinks).
/// Used to audit tie-freeness before finite-difference checks.  roots0, when
/// given, assigns the initial equivalence classes of the tape input.
void soft_skel_margins(const SoftSkelTape& tape, real& min_pool_gap, real& min_relu_margin,
                       const std::vector<std::uint32_t>* roots0 = nullptr);

/// RWLoss rate map: -1 on class-k foreground, normalized distance to the
/// nearest class-k foreground on background, +1 everywhere when a channel has
/// no foreground.
Tensor4 region_wise_map(const OneHotMask& y);

/// Applies the configured loss in the requested mode: Off on sigma(z),
/// ScnpOnly on sigma(scnp(z)), Joint as the sum of both paths.
LossResult apply_mode(const ScnpConfig& cfg, const LossFn& fn, const Tensor4& z,
                      const OneHotMask& y);

} // namespace scnp
