#include "scnp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace scnp {

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(v.begin(), v.end(), std::uint8_t{1}));
}

std::vector<int> structure_channels(int channels, MaskMode mode) {
    std::vector<int> ks;
    if (mode == MaskMode::Softmax) {
        for (int k = 1; k < channels; ++k) ks.push_back(k);
    } else {
        for (int k = 0; k < channels; ++k) ks.push_back(k);
    }
    return ks;
}

BinaryMask binarize(const Tensor4& yhat, MaskMode mode, int b, int k) {
    const Shape4 s = yhat.shape;
    require(b >= 0 && b < s.b && k >= 0 && k < s.c, "binarize: index out of range");
    BinaryMask m(s.h, s.w);
    if (mode == MaskMode::Softmax) {
        for (int y = 0; y < s.h; ++y)
            for (int x = 0; x < s.w; ++x) {
                int best = 0;
                real bv = yhat.at(b, 0, y, x);
                for (int c = 1; c < s.c; ++c) {
                    const real v = yhat.at(b, c, y, x);
                    if (v > bv) {
                        bv = v;
                        best = c;
                    }
                }
                m.at(y, x) = best == k ? 1 : 0;
            }
    } else {
        for (int y = 0; y < s.h; ++y)
            for (int x = 0; x < s.w; ++x) m.at(y, x) = yhat.at(b, k, y, x) > 0.5 ? 1 : 0;
    }
    return m;
}

double dice_coefficient(const BinaryMask& pred, const BinaryMask& gt) {
    require(pred.h == gt.h && pred.w == gt.w, "dice_coefficient: size mismatch");
    std::size_t p = 0, g = 0, inter = 0;
    for (std::size_t i = 0; i < pred.v.size(); ++i) {
        p += pred.v[i];
        g += gt.v[i];
        inter += pred.v[i] & gt.v[i];
    }
    if (p + g == 0) return 1.0;
    return 2.0 * static_cast<double>(inter) / static_cast<double>(p + g);
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
    }
};

} // namespace

int connected_components(const BinaryMask& mask, Connectivity conn) {
    const int n = mask.h * mask.w;
    UnionFind uf(n);
    for (int y = 0; y < mask.h; ++y)
        for (int x = 0; x < mask.w; ++x) {
            if (!mask.at(y, x)) continue;
            const int i = y * mask.w + x;
            // union with already-visited neighbors (W, NW, N, NE)
            if (x > 0 && mask.at(y, x - 1)) uf.unite(i, i - 1);
            if (y > 0) {
                if (mask.at(y - 1, x)) uf.unite(i, i - mask.w);
                if (conn == Connectivity::Eight) {
                    if (x > 0 && mask.at(y - 1, x - 1)) uf.unite(i, i - mask.w - 1);
                    if (x + 1 < mask.w && mask.at(y - 1, x + 1)) uf.unite(i, i - mask.w + 1);
                }
            }
        }
    int count = 0;
    for (int i = 0; i < n; ++i)
        if (mask.v[i] && uf.find(i) == i) ++count;
    return count;
}

int betti0_error(const BinaryMask& pred, const BinaryMask& gt) {
    return std::abs(connected_components(pred) - connected_components(gt));
}

namespace {

// Zhang-Suen neighborhood, clockwise from north.
inline void neighbors(const BinaryMask& m, int y, int x, int p[8]) {
    auto get = [&](int yy, int xx) -> int {
        if (yy < 0 || yy >= m.h || xx < 0 || xx >= m.w) return 0;
        return m.at(yy, xx);
    };
    p[0] = get(y - 1, x);     // N
    p[1] = get(y - 1, x + 1); // NE
    p[2] = get(y, x + 1);     // E
    p[3] = get(y + 1, x + 1); // SE
    p[4] = get(y + 1, x);     // S
    p[5] = get(y + 1, x - 1); // SW
    p[6] = get(y, x - 1);     // W
    p[7] = get(y - 1, x - 1); // NW
};

} // namespace

BinaryMask hard_skeleton(const BinaryMask& mask) {
    BinaryMask m = mask;
    std::vector<std::pair<int, int>> to_clear;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int phase = 0; phase < 2; ++phase) {
            to_clear.clear();
            for (int y = 0; y < m.h; ++y)
                for (int x = 0; x < m.w; ++x) {
                    if (!m.at(y, x)) continue;
                    int p[8];
                    neighbors(m, y, x, p);
                    const int b = p[0] + p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7];
                    if (b < 2 || b > 6) continue;
                    int a = 0;
                    for (int i = 0; i < 8; ++i)
                        if (p[i] == 0 && p[(i + 1) % 8] == 1) ++a;
                    if (a != 1) continue;
                    // p2=N, p4=E, p6=S, p8=W in the classical numbering
                    const int n = p[0], e = p[2], s = p[4], w = p[6];
                    if (phase == 0) {
                        if (n * e * s != 0 || e * s * w != 0) continue;
                    } else {
                        if (n * e * w != 0 || n * s * w != 0) continue;
                    }
                    to_clear.emplace_back(y, x);
                }
            if (!to_clear.empty()) changed = true;
            for (auto [y, x] : to_clear) m.at(y, x) = 0;
        }
    }
    return m;
}

double cldice_metric(const BinaryMask& pred, const BinaryMask& gt) {
    require(pred.h == gt.h && pred.w == gt.w, "cldice_metric: size mismatch");
    const BinaryMask sp = hard_skeleton(pred);
    const BinaryMask sg = hard_skeleton(gt);
    auto overlap_ratio = [](const BinaryMask& skel, const BinaryMask& full, const BinaryMask& other_skel) {
        const std::size_t n = skel.count();
        if (n == 0) return other_skel.count() == 0 ? 1.0 : 0.0;
        std::size_t inter = 0;
        for (std::size_t i = 0; i < skel.v.size(); ++i) inter += skel.v[i] & full.v[i];
        return static_cast<double>(inter) / static_cast<double>(n);
    };
    const double tprec = overlap_ratio(sp, gt, sg);
    const double tsens = overlap_ratio(sg, pred, sp);
    if (tprec + tsens == 0.0) return 0.0;
    return 2.0 * tprec * tsens / (tprec + tsens);
}

namespace {

// Labels 8-connected components 1..n; 0 for background.
std::vector<int> label_components(const BinaryMask& m, int& n_labels) {
    std::vector<int> label(m.v.size(), 0);
    std::vector<std::size_t> stack;
    n_labels = 0;
    for (std::size_t start = 0; start < m.v.size(); ++start) {
        if (!m.v[start] || label[start]) continue;
        ++n_labels;
        stack.push_back(start);
        label[start] = n_labels;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const int y = static_cast<int>(i) / m.w, x = static_cast<int>(i) % m.w;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= m.h || xx < 0 || xx >= m.w) continue;
                    const std::size_t j = static_cast<std::size_t>(yy) * m.w + xx;
                    if (m.v[j] && !label[j]) {
                        label[j] = n_labels;
                        stack.push_back(j);
                    }
                }
        }
    }
    return label;
}

// Background cells 4-connected to the image border (the exterior).
std::vector<std::uint8_t> exterior_background(const BinaryMask& m) {
    std::vector<std::uint8_t> ext(m.v.size(), 0);
    std::vector<std::size_t> stack;
    auto push = [&](int y, int x) {
        const std::size_t i = static_cast<std::size_t>(y) * m.w + x;
        if (!m.v[i] && !ext[i]) {
            ext[i] = 1;
            stack.push_back(i);
        }
    };
    for (int x = 0; x < m.w; ++x) {
        push(0, x);
        push(m.h - 1, x);
    }
    for (int y = 0; y < m.h; ++y) {
        push(y, 0);
        push(y, m.w - 1);
    }
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const int y = static_cast<int>(i) / m.w, x = static_cast<int>(i) % m.w;
        if (y > 0) push(y - 1, x);
        if (y + 1 < m.h) push(y + 1, x);
        if (x > 0) push(y, x - 1);
        if (x + 1 < m.w) push(y, x + 1);
    }
    return ext;
}

} // namespace

double roundness_score(const BinaryMask& mask) {
    int n_labels = 0;
    const std::vector<int> label = label_components(mask, n_labels);
    if (n_labels == 0) return 0.0;
    const std::vector<std::uint8_t> ext = exterior_background(mask);

    std::vector<double> area(n_labels + 1, 0.0), perim(n_labels + 1, 0.0);
    for (int y = 0; y < mask.h; ++y)
        for (int x = 0; x < mask.w; ++x) {
            const int l = label[static_cast<std::size_t>(y) * mask.w + x];
            if (!l) continue;
            area[l] += 1.0;
            auto exposed = [&](int yy, int xx) {
                if (yy < 0 || yy >= mask.h || xx < 0 || xx >= mask.w) return true;
                return ext[static_cast<std::size_t>(yy) * mask.w + xx] != 0;
            };
            perim[l] += exposed(y - 1, x) + exposed(y + 1, x) + exposed(y, x - 1) + exposed(y, x + 1);
        }

    double total_area = 0.0, weighted = 0.0;
    for (int l = 1; l <= n_labels; ++l) {
        const double r = 4.0 * 3.14159265358979323846 * area[l] / (perim[l] * perim[l]);
        weighted += area[l] * r;
        total_area += area[l];
    }
    return weighted / total_area;
}

double roundness_error(const BinaryMask& pred, const BinaryMask& gt) {
    return std::abs(roundness_score(pred) - roundness_score(gt));
}

BinaryMask dilate(const BinaryMask& mask, int kernel) {
    require(kernel >= 1 && kernel % 2 == 1, "dilate: kernel must be odd and positive");
    const int r = kernel / 2;
    BinaryMask out(mask.h, mask.w);
    for (int y = 0; y < mask.h; ++y)
        for (int x = 0; x < mask.w; ++x) {
            std::uint8_t v = 0;
            for (int dy = -r; dy <= r && !v; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= mask.h) continue;
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= mask.w) continue;
                    if (mask.at(yy, xx)) {
                        v = 1;
                        break;
                    }
                }
            }
            out.at(y, x) = v;
        }
    return out;
}

BinaryMask erode(const BinaryMask& mask, int kernel) {
    require(kernel >= 1 && kernel % 2 == 1, "erode: kernel must be odd and positive");
    const int r = kernel / 2;
    BinaryMask out(mask.h, mask.w);
    for (int y = 0; y < mask.h; ++y)
        for (int x = 0; x < mask.w; ++x) {
            std::uint8_t v = 1;
            // window clipped at borders, matching window_min
            for (int dy = -r; dy <= r && v; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= mask.h) continue;
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= mask.w) continue;
                    if (!mask.at(yy, xx)) {
                        v = 0;
                        break;
                    }
                }
            }
            out.at(y, x) = v;
        }
    return out;
}

BinaryMask binary_closing(const BinaryMask& mask, int kernel, int max_iterations) {
    BinaryMask m = mask;
    for (int it = 0; it < max_iterations; ++it) {
        BinaryMask next = erode(dilate(m, kernel), kernel);
        if (next == m) break;
        m = std::move(next);
    }
    return m;
}

void MetricStats::finalize() {
    const std::size_t n = per_image.size();
    if (n == 0) {
        mean = stddev = 0.0;
        return;
    }
    double s = 0.0;
    for (double x : per_image) s += x;
    mean = s / static_cast<double>(n);
    double sq = 0.0;
    for (double x : per_image) sq += (x - mean) * (x - mean);
    stddev = std::sqrt(sq / static_cast<double>(n));
}

namespace {

void stats_json(std::ostringstream& os, const char* name, const MetricStats& st) {
    os << "\"" << name << "\":{\"mean\":" << st.mean << ",\"std\":" << st.stddev
       << ",\"per_image\":[";
    for (std::size_t i = 0; i < st.per_image.size(); ++i) {
        if (i) os << ",";
        os << st.per_image[i];
    }
    os << "]}";
}

} // namespace

std::string MetricsReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{";
    stats_json(os, "dice", dice);
    os << ",";
    stats_json(os, "betti0_error", betti0);
    os << ",";
    stats_json(os, "cldice", cldice);
    os << ",";
    stats_json(os, "roundness_error", roundness);
    os << "}\n";
    return os.str();
}

std::string MetricsReport::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "image,dice,betti0_error,cldice,roundness_error\n";
    for (std::size_t i = 0; i < dice.per_image.size(); ++i)
        os << i << "," << dice.per_image[i] << "," << betti0.per_image[i] << ","
           << cldice.per_image[i] << "," << roundness.per_image[i] << "\n";
    os << "mean," << dice.mean << "," << betti0.mean << "," << cldice.mean << ","
       << roundness.mean << "\n";
    os << "std," << dice.stddev << "," << betti0.stddev << "," << cldice.stddev << ","
       << roundness.stddev << "\n";
    return os.str();
}

MetricsReport evaluate_predictions(const Tensor4& yhat, const OneHotMask& gt, int closing_kernel) {
    require_same_shape(yhat, gt.t, "evaluate_predictions");
    const Shape4 s = yhat.shape;
    const std::vector<int> ks = structure_channels(s.c, gt.mode);
    require(!ks.empty(), "evaluate_predictions: no structure channels");

    MetricsReport rep;
    for (int b = 0; b < s.b; ++b) {
        double d = 0.0, b0 = 0.0, cd = 0.0, re = 0.0;
        for (int k : ks) {
            BinaryMask pm = binarize(yhat, gt.mode, b, k);
            if (closing_kernel > 0) pm = binary_closing(pm, closing_kernel);
            const BinaryMask gm = binarize(gt.t, gt.mode, b, k);
            d += dice_coefficient(pm, gm);
            b0 += betti0_error(pm, gm);
            cd += cldice_metric(pm, gm);
            re += roundness_error(pm, gm);
        }
        const double nk = static_cast<double>(ks.size());
        rep.dice.per_image.push_back(d / nk);
        rep.betti0.per_image.push_back(b0 / nk);
        rep.cldice.per_image.push_back(cd / nk);
        rep.roundness.per_image.push_back(re / nk);
    }
    rep.dice.finalize();
    rep.betti0.finalize();
    rep.cldice.finalize();
    rep.roundness.finalize();
    return rep;
}

} // namespace scnp
