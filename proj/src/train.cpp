#include "scnp/train.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "scnp/activations.hpp"
#include "scnp/metrics.hpp"
#include "scnp/optim.hpp"

namespace scnp {

void TrainConfig::validate() const {
    require(epochs >= 1, "train: epochs must be >= 1");
    require(batch_size >= 1, "train: batch size must be >= 1");
    require(lr > 0.0, "train: lr must be positive");
    require(momentum >= 0.0 && momentum < 1.0, "train: momentum must be in [0,1)");
    require(scnp.w >= 1 && scnp.w % 2 == 1, "train: w must be odd and positive");
}

std::string TrainConfig::json_echo() const {
    nlohmann::json j{{"epochs", epochs},
                     {"batch_size", batch_size},
                     {"lr", lr},
                     {"momentum", momentum},
                     {"seed", seed},
                     {"loss", loss.str()},
                     {"scnp", scnp.mode == ScnpMode::Off      ? "off"
                              : scnp.mode == ScnpMode::ScnpOnly ? "on"
                                                                : "joint"},
                     {"w", scnp.w}};
    return j.dump();
}

std::string ConvergenceLog::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "epoch,train_loss,val_loss,val_dice,val_betti0\n";
    for (const EpochRow& r : rows)
        os << r.epoch << "," << r.train_loss << "," << r.val_loss << "," << r.val_dice << ","
           << r.val_betti0 << "\n";
    return os.str();
}

void assemble_batch(const Dataset& ds, const std::vector<std::size_t>& idx, std::size_t first,
                    std::size_t count, Tensor4& images, Tensor4& masks) {
    const int h = ds.height, w = ds.width;
    images = Tensor4(static_cast<int>(count), 1, h, w);
    masks = Tensor4(static_cast<int>(count), ds.classes, h, w);
    const std::size_t img_n = static_cast<std::size_t>(h) * w;
    const std::size_t msk_n = static_cast<std::size_t>(ds.classes) * h * w;
    for (std::size_t i = 0; i < count; ++i) {
        const Sample& s = ds.samples[idx[first + i]];
        std::copy(s.image.v.begin(), s.image.v.end(), images.v.begin() + i * img_n);
        std::copy(s.mask.v.begin(), s.mask.v.end(), masks.v.begin() + i * msk_n);
    }
}

Tensor4 predict_probabilities(const TinyCnn& m, const Dataset& ds, MaskMode mode) {
    const int n = static_cast<int>(ds.samples.size());
    Tensor4 out(n, m.c_out, ds.height, ds.width);
    const std::size_t chunk = static_cast<std::size_t>(m.c_out) * ds.height * ds.width;
    std::vector<std::size_t> idx(ds.samples.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    const std::size_t bs = 8;
    for (std::size_t first = 0; first < idx.size(); first += bs) {
        const std::size_t count = std::min(bs, idx.size() - first);
        Tensor4 images, masks;
        assemble_batch(ds, idx, first, count, images, masks);
        const Tensor4 logits = model_forward(m, images);
        const Tensor4 probs = mode == MaskMode::Softmax ? softmax_channels(logits)
                                                        : sigmoid(logits);
        std::copy(probs.v.begin(), probs.v.end(), out.v.begin() + first * chunk);
    }
    return out;
}

TrainResult train(const TrainConfig& cfg, const Dataset& train_data, const Dataset& val_data) {
    cfg.validate();
    require(!train_data.samples.empty(), "train: empty dataset");
    require(!val_data.samples.empty(), "train: empty validation set");

    TrainResult res;
    res.model = TinyCnn(1, train_data.classes);
    res.model.init(cfg.seed);
    SgdState state(res.model);

    const std::size_t n = train_data.samples.size();
    double total_seconds = 0.0;

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const std::vector<std::size_t> order = epoch_order(n, cfg.seed, epoch);
        double loss_sum = 0.0;
        for (std::size_t first = 0; first < n; first += cfg.batch_size) {
            const std::size_t count = std::min<std::size_t>(cfg.batch_size, n - first);
            Tensor4 images, masks;
            assemble_batch(train_data, order, first, count, images, masks);
            const OneHotMask y(std::move(masks), train_data.mode);

            const auto t0 = std::chrono::steady_clock::now();
            ForwardCache cache;
            const Tensor4 logits = model_forward(res.model, images, &cache);
            LossResult lr;
            try {
                lr = apply_mode(cfg.scnp, cfg.loss, logits, y);
            } catch (const NumericalError& e) {
                throw NumericalError("epoch " + std::to_string(epoch) + ", batch " +
                                     std::to_string(first / cfg.batch_size) + ", loss " +
                                     cfg.loss.str() + ": " + e.what());
            }
            if (!std::isfinite(lr.value))
                throw NumericalError("epoch " + std::to_string(epoch) + ": non-finite loss");
            const ModelGrads grads = model_backward(res.model, cache, lr.grad_z);
            sgd_step_model(res.model, grads, cfg.lr, cfg.momentum, state);
            const auto t1 = std::chrono::steady_clock::now();
            total_seconds += std::chrono::duration<double>(t1 - t0).count();
            ++res.iterations;

            loss_sum += lr.value * static_cast<double>(count);
        }

        EpochRow row;
        row.epoch = epoch;
        row.train_loss = loss_sum / static_cast<double>(n);

        // validation: one forward pass feeds both the configured objective and
        // the plain-prediction metric columns
        {
            std::vector<std::size_t> vidx(val_data.samples.size());
            for (std::size_t i = 0; i < vidx.size(); ++i) vidx[i] = i;
            const std::size_t vn = vidx.size();
            const std::size_t chunk =
                static_cast<std::size_t>(val_data.classes) * val_data.height * val_data.width;
            Tensor4 probs(static_cast<int>(vn), val_data.classes, val_data.height,
                          val_data.width);
            double vloss = 0.0;
            for (std::size_t first = 0; first < vn; first += cfg.batch_size) {
                const std::size_t count = std::min<std::size_t>(cfg.batch_size, vn - first);
                Tensor4 images, masks;
                assemble_batch(val_data, vidx, first, count, images, masks);
                const OneHotMask y(std::move(masks), val_data.mode);
                const Tensor4 logits = model_forward(res.model, images);
                vloss += apply_mode(cfg.scnp, cfg.loss, logits, y).value *
                         static_cast<double>(count);
                const Tensor4 p = val_data.mode == MaskMode::Softmax ? softmax_channels(logits)
                                                                     : sigmoid(logits);
                std::copy(p.v.begin(), p.v.end(), probs.v.begin() + first * chunk);
            }
            row.val_loss = vloss / static_cast<double>(vn);

            Tensor4 allm(static_cast<int>(vn), val_data.classes, val_data.height, val_data.width);
            for (std::size_t i = 0; i < vn; ++i)
                std::copy(val_data.samples[i].mask.v.begin(), val_data.samples[i].mask.v.end(),
                          allm.v.begin() + i * val_data.samples[i].mask.size());
            const OneHotMask gt(std::move(allm), val_data.mode);
            const MetricsReport rep = evaluate_predictions(probs, gt);
            row.val_dice = rep.dice.mean;
            row.val_betti0 = rep.betti0.mean;
        }
        res.log.rows.push_back(row);
    }

    res.mean_iter_seconds = res.iterations > 0 ? total_seconds / res.iterations : 0.0;
    return res;
}

} // namespace scnp
