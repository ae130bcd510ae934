#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scnp/tensor.hpp"

namespace scnp {

struct BinaryMask {
    int h = 0, w = 0;
    std::vector<std::uint8_t> v;

    BinaryMask() = default;
    BinaryMask(int h_, int w_) : h(h_), w(w_), v(static_cast<std::size_t>(h_) * w_, 0) {}

    std::uint8_t& at(int y, int x) { return v[static_cast<std::size_t>(y) * w + x]; }
    std::uint8_t at(int y, int x) const { return v[static_cast<std::size_t>(y) * w + x]; }
    bool operator==(const BinaryMask&) const = default;
    std::size_t count() const;
};

enum class Connectivity { Four = 4, Eight = 8 };

/// Channels carrying structures: all but channel 0 in softmax mode (channel 0
/// is background by convention), every channel in sigmoid mode.
std::vector<int> structure_channels(int channels, MaskMode mode);

/// Hard class mask of one batch item: per-pixel argmax in softmax mode
/// (lowest channel wins ties), strict > 0.5 threshold in sigmoid mode.
BinaryMask binarize(const Tensor4& yhat, MaskMode mode, int b, int k);

double dice_coefficient(const BinaryMask& pred, const BinaryMask& gt);

/// Union-find component count; foreground connectivity defaults to 8.
int connected_components(const BinaryMask& mask, Connectivity conn = Connectivity::Eight);

int betti0_error(const BinaryMask& pred, const BinaryMask& gt);

/// Zhang-Suen thinning to a 1-pixel-wide skeleton.
BinaryMask hard_skeleton(const BinaryMask& mask);

/// Harmonic mean of skeleton precision |S(pred) ∩ gt|/|S(pred)| and
/// sensitivity |S(gt) ∩ pred|/|S(gt)|; empty-vs-empty follows the Dice
/// convention (1.0), empty-vs-nonempty gives 0.
double cldice_metric(const BinaryMask& pred, const BinaryMask& gt);

/// Area-weighted mean of 4*pi*A/P^2 over components, P counted as unit faces
/// between the component and border-connected background (outer boundary
/// only).  Empty masks score 0.
double roundness_score(const BinaryMask& mask);

double roundness_error(const BinaryMask& pred, const BinaryMask& gt);

BinaryMask dilate(const BinaryMask& mask, int kernel);
BinaryMask erode(const BinaryMask& mask, int kernel);

/// Dilation then erosion with a square kernel, repeated until fixpoint or the
/// iteration cap.
BinaryMask binary_closing(const BinaryMask& mask, int kernel, int max_iterations = 50);

struct MetricStats {
    std::vector<double> per_image;
    double mean = 0.0;
    double stddev = 0.0;
    void finalize();
};

struct MetricsReport {
    MetricStats dice;
    MetricStats betti0;
    MetricStats cldice;
    MetricStats roundness;

    std::string to_json() const;
    std::string to_csv() const;
};

/// Per-image metrics (macro-averaged over structure channels) between
/// predicted probabilities and ground truth.  closing_kernel 0 disables the
/// binary-closing post-processing.
MetricsReport evaluate_predictions(const Tensor4& yhat, const OneHotMask& gt,
                                   int closing_kernel = 0);

} // namespace scnp
