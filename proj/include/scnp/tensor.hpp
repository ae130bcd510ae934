#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace scnp {

using real = double;

struct Shape4 {
    int b = 0, c = 0, h = 0, w = 0;

    std::size_t size() const {
        return static_cast<std::size_t>(b) * c * h * w;
    }
    std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
    bool operator==(const Shape4&) const = default;
    std::string str() const {
        return "(" + std::to_string(b) + "," + std::to_string(c) + "," +
               std::to_string(h) + "," + std::to_string(w) + ")";
    }
};

/// Dense rank-4 array (batch, channel, height, width), row-major, width fastest.
struct Tensor4 {
    Shape4 shape;
    std::vector<real> v;

    Tensor4() = default;
    explicit Tensor4(Shape4 s) : shape(s), v(s.size(), 0.0) {}
    Tensor4(int b, int c, int h, int w) : Tensor4(Shape4{b, c, h, w}) {}

    std::size_t size() const { return v.size(); }

    std::size_t idx(int b, int c, int y, int x) const {
        return ((static_cast<std::size_t>(b) * shape.c + c) * shape.h + y) * shape.w + x;
    }
    real& at(int b, int c, int y, int x) { return v[idx(b, c, y, x)]; }
    real at(int b, int c, int y, int x) const { return v[idx(b, c, y, x)]; }

    real& operator[](std::size_t i) { return v[i]; }
    real operator[](std::size_t i) const { return v[i]; }

    void fill(real x) { std::fill(v.begin(), v.end(), x); }
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

/// Non-finite values or failed numeric checks; the CLI maps this to exit 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require_same_shape(const Tensor4& a, const Tensor4& b, const char* where) {
    if (!(a.shape == b.shape))
        throw std::invalid_argument(std::string(where) + ": shape mismatch " +
                                    a.shape.str() + " vs " + b.shape.str());
}

bool all_finite(const Tensor4& t);

/// Channel interpretation of a one-hot mask.
enum class MaskMode { Softmax, Sigmoid };

/// Binary ground truth with the same layout as Tensor4.  In softmax mode the
/// channels are mutually exclusive (one-hot per pixel); in sigmoid mode each
/// channel is an independent binary target.
struct OneHotMask {
    Tensor4 t;
    MaskMode mode = MaskMode::Softmax;

    OneHotMask() = default;
    OneHotMask(Tensor4 mask, MaskMode m) : t(std::move(mask)), mode(m) { validate(); }

    const Shape4& shape() const { return t.shape; }

    void validate() const;
};

} // namespace scnp
