#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scnp/datagen.hpp"
#include "scnp/losses.hpp"
#include "scnp/model.hpp"
#include "scnp/tensor.hpp"

namespace scnp {

struct TrainConfig {
    int epochs = 24;
    int batch_size = 8;
    real lr = 0.05;
    real momentum = 0.9;
    std::uint64_t seed = 0;
    LossFn loss;
    ScnpConfig scnp;

    void validate() const;
    std::string json_echo() const;
};

struct EpochRow {
    int epoch; // 1-based
    real train_loss;
    real val_loss;
    real val_dice;
    real val_betti0;
};

struct ConvergenceLog {
    std::vector<EpochRow> rows;
    std::string to_csv() const;
};

struct TrainResult {
    TinyCnn model;
    ConvergenceLog log;
    double mean_iter_seconds = 0.0;
    long iterations = 0;
};

/// Mini-batch SGD with the configured loss and SCNP mode.  Deterministic for a
/// fixed (config, dataset) regardless of thread count.  val_data may alias
/// train_data; it is used for the per-epoch validation columns.
TrainResult train(const TrainConfig& cfg, const Dataset& train_data, const Dataset& val_data);

/// Stacks dataset samples into batch tensors.
void assemble_batch(const Dataset& ds, const std::vector<std::size_t>& idx, std::size_t first,
                    std::size_t count, Tensor4& images, Tensor4& masks);

/// Plain (SCNP-free) predictions of a model over a dataset.
Tensor4 predict_probabilities(const TinyCnn& m, const Dataset& ds, MaskMode mode);

} // namespace scnp
