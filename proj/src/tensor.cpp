#include "scnp/tensor.hpp"

#include <cmath>

namespace scnp {

bool all_finite(const Tensor4& t) {
    for (real x : t.v)
        if (!std::isfinite(x)) return false;
    return true;
}

void OneHotMask::validate() const {
    for (real x : t.v)
        if (x != 0.0 && x != 1.0)
            throw std::invalid_argument("OneHotMask: values must be 0 or 1");
    if (mode == MaskMode::Softmax) {
        for (int b = 0; b < t.shape.b; ++b)
            for (int y = 0; y < t.shape.h; ++y)
                for (int x = 0; x < t.shape.w; ++x) {
                    real s = 0.0;
                    for (int c = 0; c < t.shape.c; ++c) s += t.at(b, c, y, x);
                    if (s != 1.0)
                        throw std::invalid_argument(
                            "OneHotMask: softmax mode needs exactly one active channel per pixel");
                }
    }
}

} // namespace scnp
