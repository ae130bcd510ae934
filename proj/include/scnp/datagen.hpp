#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scnp/metrics.hpp"
#include "scnp/tensor.hpp"

namespace scnp {

enum class GenKind { Tubular, Round };

struct GenParams {
    GenKind kind = GenKind::Tubular;
    int n_samples = 16;
    int size = 64;
    real thickness = 2.0; // tubular structure thickness in pixels
    real radius_min = 4.0;
    real radius_max = 9.0;
    real noise = 0.15;
    real dropout_prob = 0.5; // chance of each of two dropout windows per curve
    int dropout_len_min = 2;
    int dropout_len_max = 5;
    // dropout segments render at this fraction of the tube intensity; a faint
    // residual keeps the breakage learnable instead of information-free
    real dropout_residual = 0.3;
    std::uint64_t seed = 0;
};

struct SampleRef {
    std::string id;
    std::string image; // file names relative to the dataset directory
    std::string mask;
    int components = 0;
};

struct DatasetManifest {
    GenParams params;
    int classes = 2;
    int height = 0, width = 0;
    std::vector<SampleRef> samples;
};

/// Thin tubular curves with intensity dropout on the image only; masks stay
/// intact so connectivity must be learned.
DatasetManifest gen_tubular(const GenParams& p, const std::string& outdir);

/// Non-overlapping noisy disks.
DatasetManifest gen_round(const GenParams& p, const std::string& outdir);

DatasetManifest generate_dataset(const GenParams& p, const std::string& outdir);

struct Sample {
    std::string id;
    Tensor4 image; // (1, 1, h, w)
    Tensor4 mask;  // (1, c, h, w), one-hot
};

struct Dataset {
    int classes = 2;
    int height = 0, width = 0;
    MaskMode mode = MaskMode::Softmax;
    std::vector<Sample> samples;
};

/// Loads and validates a generated dataset directory.
Dataset load_dataset(const std::string& dir);

/// Seed-determined sample order for one epoch.
std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch);

/// Median structure thickness: 2*d - 1 with d the distance from each skeleton
/// pixel to the nearest background pixel.
double estimate_median_thickness(const BinaryMask& mask);

} // namespace scnp
