#pragma once

#include <cstdint>
#include <string>

#include "scnp/losses.hpp"
#include "scnp/tensor.hpp"

namespace scnp {

struct GradcheckResult {
    real max_rel_err = 0.0;
    std::size_t worst_index = 0;
    real analytic = 0.0;
    real numeric = 0.0;
    real pool_gap = 0.0;   // audited tie margins of the accepted fixture
    real relu_margin = 0.0;
    int draws = 1; // fixtures drawn before the margins were clean
};

/// Central finite differences (eps = 1e-3) of the full composition
/// loss(activation(scnp(z))) against the analytic gradient, coordinate-wise,
/// at a randomized tie-free point.  Fixtures whose pooling or relu margins
/// are too small for the probe are redrawn from the seed chain.
GradcheckResult gradcheck(const LossFn& fn, const ScnpConfig& cfg, MaskMode mode,
                          std::uint64_t seed);

/// Tolerance the configuration is expected to meet (looser for clDice, whose
/// composition has piecewise-linear kinks).
real gradcheck_tolerance(const LossFn& fn);

} // namespace scnp
