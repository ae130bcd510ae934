#include "reference.hpp"

#include <limits>
#include <stdexcept>

namespace scnp::ref {

std::pair<Tensor4, PoolTrace> window_scan(const Tensor4& t, int w, bool take_min) {
    if (w < 1 || w % 2 == 0) throw std::invalid_argument("window_scan: bad window");
    const Shape4 s = t.shape;
    Tensor4 out(s);
    PoolTrace trace{s, std::vector<std::uint32_t>(s.size())};
    const int r = w / 2;
    for (int b = 0; b < s.b; ++b)
        for (int c = 0; c < s.c; ++c)
            for (int y = 0; y < s.h; ++y)
                for (int x = 0; x < s.w; ++x) {
                    bool first = true;
                    real best = 0.0;
                    std::size_t best_j = 0;
                    for (int yy = y - r; yy <= y + r; ++yy) {
                        if (yy < 0 || yy >= s.h) continue;
                        for (int xx = x - r; xx <= x + r; ++xx) {
                            if (xx < 0 || xx >= s.w) continue;
                            const std::size_t j = t.idx(b, c, yy, xx);
                            const real v = t.v[j];
                            if (first || (take_min ? v < best : v > best)) {
                                best = v;
                                best_j = j;
                                first = false;
                            }
                        }
                    }
                    const std::size_t i = t.idx(b, c, y, x);
                    out.v[i] = best;
                    trace.src[i] = static_cast<std::uint32_t>(best_j);
                }
    return {std::move(out), std::move(trace)};
}

ScnpScanResult scnp_scan(const Tensor4& z, const Tensor4& mask, int w) {
    if (!(z.shape == mask.shape)) throw std::invalid_argument("scnp_scan: shape mismatch");
    if (w < 1 || w % 2 == 0) throw std::invalid_argument("scnp_scan: bad window");
    const Shape4 s = z.shape;
    ScnpScanResult res{Tensor4(s), std::vector<std::uint32_t>(s.size())};
    const int r = w / 2;
    for (int b = 0; b < s.b; ++b)
        for (int c = 0; c < s.c; ++c)
            for (int y = 0; y < s.h; ++y)
                for (int x = 0; x < s.w; ++x) {
                    const std::size_t i = z.idx(b, c, y, x);
                    const real cls = mask.v[i];
                    const bool fg = cls != 0.0;
                    bool first = true;
                    real best = 0.0;
                    std::size_t best_j = i;
                    for (int yy = y - r; yy <= y + r; ++yy) {
                        if (yy < 0 || yy >= s.h) continue;
                        for (int xx = x - r; xx <= x + r; ++xx) {
                            if (xx < 0 || xx >= s.w) continue;
                            const std::size_t j = z.idx(b, c, yy, xx);
                            if (mask.v[j] != cls) continue;
                            const real v = z.v[j];
                            if (first || (fg ? v < best : v > best)) {
                                best = v;
                                best_j = j;
                                first = false;
                            }
                        }
                    }
                    res.out.v[i] = best;
                    res.src[i] = static_cast<std::uint32_t>(best_j);
                }
    return res;
}

int flood_fill_count(const BinaryMask& mask, Connectivity conn) {
    std::vector<std::uint8_t> seen(mask.v.size(), 0);
    std::vector<std::size_t> queue;
    int count = 0;
    for (std::size_t start = 0; start < mask.v.size(); ++start) {
        if (!mask.v[start] || seen[start]) continue;
        ++count;
        seen[start] = 1;
        queue.clear();
        queue.push_back(start);
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int y = static_cast<int>(queue[qi]) / mask.w;
            const int x = static_cast<int>(queue[qi]) % mask.w;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dy == 0 && dx == 0) continue;
                    if (conn == Connectivity::Four && dy != 0 && dx != 0) continue;
                    const int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= mask.h || xx < 0 || xx >= mask.w) continue;
                    const std::size_t j = static_cast<std::size_t>(yy) * mask.w + xx;
                    if (mask.v[j] && !seen[j]) {
                        seen[j] = 1;
                        queue.push_back(j);
                    }
                }
        }
    }
    return count;
}

std::vector<std::int64_t> edt_bruteforce(const std::vector<std::uint8_t>& seeds, int h, int w) {
    std::vector<std::int64_t> d(static_cast<std::size_t>(h) * w,
                                std::numeric_limits<std::int64_t>::max());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto& cell = d[static_cast<std::size_t>(y) * w + x];
            for (int sy = 0; sy < h; ++sy)
                for (int sx = 0; sx < w; ++sx) {
                    if (!seeds[static_cast<std::size_t>(sy) * w + sx]) continue;
                    const std::int64_t dy = y - sy, dx = x - sx;
                    const std::int64_t dd = dy * dy + dx * dx;
                    if (dd < cell) cell = dd;
                }
        }
    return d;
}

namespace {

// Crack-following walk around one component's outer boundary; returns the
// number of unit edges.  Object pixels are 8-connected, so ambiguous corners
// are crossed diagonally.
long walk_perimeter(const std::vector<int>& label, int lab, int h, int w, int py, int px) {
    auto obj = [&](int y, int x) {
        if (y < 0 || y >= h || x < 0 || x >= w) return false;
        return label[static_cast<std::size_t>(y) * w + x] == lab;
    };
    // directions: 0=R(+x) 1=D(+y) 2=L(-x) 3=U(-y)
    const int dcx[4] = {1, 0, -1, 0};
    const int dcy[4] = {0, 1, 0, -1};
    auto cells_ahead = [&](int cx, int cy, int dir, bool& rf, bool& lf) {
        switch (dir) {
        case 0: rf = obj(cy, cx); lf = obj(cy - 1, cx); break;
        case 1: rf = obj(cy, cx - 1); lf = obj(cy, cx); break;
        case 2: rf = obj(cy - 1, cx - 1); lf = obj(cy, cx - 1); break;
        default: rf = obj(cy - 1, cx); lf = obj(cy - 1, cx - 1); break;
        }
    };
    int cx = px, cy = py, dir = 0;
    long edges = 0;
    const long guard = 8L * h * w + 16;
    for (long step = 0; step < guard; ++step) {
        bool rf = false, lf = false;
        cells_ahead(cx, cy, dir, rf, lf);
        if (rf && !lf) {
            cx += dcx[dir];
            cy += dcy[dir];
            ++edges;
        } else if (!rf && !lf) {
            dir = (dir + 1) % 4; // convex corner, turn right
        } else {
            dir = (dir + 3) % 4; // concave or diagonal crossing, turn left
        }
        if (cx == px && cy == py && dir == 0 && edges > 0) return edges;
    }
    throw std::runtime_error("walk_perimeter: boundary walk did not close");
}

} // namespace

double roundness_by_boundary_walk(const BinaryMask& mask) {
    // 8-connected labeling by BFS
    std::vector<int> label(mask.v.size(), 0);
    std::vector<std::size_t> queue;
    struct Comp {
        long area = 0;
        int top_y = 0, top_x = 0;
    };
    std::vector<Comp> comps;
    for (std::size_t start = 0; start < mask.v.size(); ++start) {
        if (!mask.v[start] || label[start]) continue;
        const int lab = static_cast<int>(comps.size()) + 1;
        Comp comp;
        comp.top_y = static_cast<int>(start) / mask.w;
        comp.top_x = static_cast<int>(start) % mask.w;
        label[start] = lab;
        queue.clear();
        queue.push_back(start);
        while (!queue.empty()) {
            const std::size_t i = queue.back();
            queue.pop_back();
            ++comp.area;
            const int y = static_cast<int>(i) / mask.w, x = static_cast<int>(i) % mask.w;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int yy = y + dy, xx = x + dx;
                    if (yy < 0 || yy >= mask.h || xx < 0 || xx >= mask.w) continue;
                    const std::size_t j = static_cast<std::size_t>(yy) * mask.w + xx;
                    if (mask.v[j] && !label[j]) {
                        label[j] = lab;
                        queue.push_back(j);
                    }
                }
        }
        comps.push_back(comp);
    }
    if (comps.empty()) return 0.0;

    double total_area = 0.0, weighted = 0.0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const long p = walk_perimeter(label, static_cast<int>(c) + 1, mask.h, mask.w,
                                      comps[c].top_y, comps[c].top_x);
        const double area = static_cast<double>(comps[c].area);
        const double r = 4.0 * 3.14159265358979323846 * area / (static_cast<double>(p) * p);
        weighted += area * r;
        total_area += area;
    }
    return weighted / total_area;
}

} // namespace scnp::ref
