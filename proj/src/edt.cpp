#include "scnp/edt.hpp"

#include <limits>

namespace scnp {

namespace {

constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max();

// 1-D squared distance lower envelope over f, writing min_p (q-p)^2 + f[p].
void envelope_1d(const std::vector<std::int64_t>& f, std::vector<std::int64_t>& d,
                 std::vector<int>& v, std::vector<double>& zb) {
    const int n = static_cast<int>(f.size());
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kFar) continue;
        double s;
        while (k >= 0) {
            const int p = v[k];
            s = (static_cast<double>(f[q]) + static_cast<double>(q) * q -
                 (static_cast<double>(f[p]) + static_cast<double>(p) * p)) /
                (2.0 * (q - p));
            if (s <= zb[k]) {
                --k;
            } else {
                break;
            }
        }
        if (k < 0) {
            k = 0;
            v[0] = q;
            zb[0] = -std::numeric_limits<double>::infinity();
        } else {
            ++k;
            v[k] = q;
            zb[k] = s;
        }
    }
    if (k < 0) {
        for (int q = 0; q < n; ++q) d[q] = kFar;
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (j < k && zb[j + 1] < q) ++j;
        const std::int64_t dq = q - v[j];
        d[q] = dq * dq + f[v[j]];
    }
}

} // namespace

std::vector<std::int64_t> squared_edt(const std::vector<std::uint8_t>& seeds, int h, int w) {
    std::vector<std::int64_t> g(static_cast<std::size_t>(h) * w, kFar);

    // column pass: vertical distance to nearest seed
    for (int x = 0; x < w; ++x) {
        std::int64_t dist = kFar;
        for (int y = 0; y < h; ++y) {
            if (seeds[static_cast<std::size_t>(y) * w + x]) dist = 0;
            else if (dist != kFar) ++dist;
            if (dist != kFar) g[static_cast<std::size_t>(y) * w + x] = dist;
        }
        dist = kFar;
        for (int y = h - 1; y >= 0; --y) {
            if (seeds[static_cast<std::size_t>(y) * w + x]) dist = 0;
            else if (dist != kFar) ++dist;
            auto& cell = g[static_cast<std::size_t>(y) * w + x];
            if (dist != kFar && (cell == kFar || dist < cell)) cell = dist;
        }
    }
    for (auto& x : g)
        if (x != kFar) x *= x;

    // row pass
    std::vector<std::int64_t> out(g.size());
    std::vector<std::int64_t> f(w), d(w);
    std::vector<int> v(w);
    std::vector<double> zb(static_cast<std::size_t>(w) + 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) f[x] = g[static_cast<std::size_t>(y) * w + x];
        envelope_1d(f, d, v, zb);
        for (int x = 0; x < w; ++x) out[static_cast<std::size_t>(y) * w + x] = d[x];
    }
    return out;
}

} // namespace scnp
