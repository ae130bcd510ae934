#include "scnp/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "scnp/edt.hpp"
#include "scnp/io.hpp"
#include "scnp/rng.hpp"

namespace scnp {

using nlohmann::json;

namespace {

struct Point {
    real x, y;
};

struct Polyline {
    std::vector<Point> pts;
    std::vector<real> arclen; // cumulative, arclen[0] = 0
    real total = 0.0;
};

Polyline sample_bezier(Point p0, Point p1, Point p2, int segments) {
    Polyline pl;
    pl.pts.reserve(segments + 1);
    pl.arclen.reserve(segments + 1);
    for (int i = 0; i <= segments; ++i) {
        const real t = static_cast<real>(i) / segments;
        const real u = 1.0 - t;
        pl.pts.push_back({u * u * p0.x + 2 * u * t * p1.x + t * t * p2.x,
                          u * u * p0.y + 2 * u * t * p1.y + t * t * p2.y});
        if (i == 0) {
            pl.arclen.push_back(0.0);
        } else {
            const real dx = pl.pts[i].x - pl.pts[i - 1].x;
            const real dy = pl.pts[i].y - pl.pts[i - 1].y;
            pl.arclen.push_back(pl.arclen[i - 1] + std::sqrt(dx * dx + dy * dy));
        }
    }
    pl.total = pl.arclen.back();
    return pl;
}

// distance from q to segment ab, plus the arclength of the closest point
void segment_distance(Point a, Point b, real sa, real sb, Point q, real& best_d2, real& best_s) {
    const real vx = b.x - a.x, vy = b.y - a.y;
    const real len2 = vx * vx + vy * vy;
    real t = 0.0;
    if (len2 > 0.0) {
        t = ((q.x - a.x) * vx + (q.y - a.y) * vy) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    const real dx = q.x - (a.x + t * vx), dy = q.y - (a.y + t * vy);
    const real d2 = dx * dx + dy * dy;
    if (d2 < best_d2) {
        best_d2 = d2;
        best_s = sa + t * (sb - sa);
    }
}

struct Interval {
    real lo, hi;
};

struct SampleTensors {
    Tensor4 image; // (1,1,h,w)
    Tensor4 mask;  // (1,2,h,w)
    int components = 0;
};

SampleTensors make_tubular_sample(const GenParams& p, Rng& rng) {
    const int n = p.size;
    BinaryMask fg(n, n);
    BinaryMask bright(n, n);
    BinaryMask faint(n, n); // covered only by dropout segments

    const int n_curves = 2 + static_cast<int>(rng.uniform_int(3)); // 2..4
    const real margin = 3.0;
    const real radius = p.thickness * 0.5;
    for (int c = 0; c < n_curves; ++c) {
        auto rnd_pt = [&] {
            return Point{rng.uniform(margin, n - 1 - margin), rng.uniform(margin, n - 1 - margin)};
        };
        const Polyline pl = sample_bezier(rnd_pt(), rnd_pt(), rnd_pt(), 128);

        std::vector<Interval> dropouts;
        for (int d = 0; d < 2; ++d) {
            if (rng.uniform01() >= p.dropout_prob) continue;
            const real len = static_cast<real>(
                p.dropout_len_min + static_cast<int>(rng.uniform_int(
                                        p.dropout_len_max - p.dropout_len_min + 1)));
            const real at = rng.uniform01() * std::max(pl.total - len, real(0.0));
            dropouts.push_back({at, at + len});
        }

        // rasterize within the curve's bounding box
        real minx = pl.pts[0].x, maxx = minx, miny = pl.pts[0].y, maxy = miny;
        for (const Point& q : pl.pts) {
            minx = std::min(minx, q.x);
            maxx = std::max(maxx, q.x);
            miny = std::min(miny, q.y);
            maxy = std::max(maxy, q.y);
        }
        const int x0 = std::max(0, static_cast<int>(std::floor(minx - radius - 1)));
        const int x1 = std::min(n - 1, static_cast<int>(std::ceil(maxx + radius + 1)));
        const int y0 = std::max(0, static_cast<int>(std::floor(miny - radius - 1)));
        const int y1 = std::min(n - 1, static_cast<int>(std::ceil(maxy + radius + 1)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                real d2 = std::numeric_limits<real>::infinity(), s = 0.0;
                const Point q{static_cast<real>(x), static_cast<real>(y)};
                for (std::size_t i = 0; i + 1 < pl.pts.size(); ++i)
                    segment_distance(pl.pts[i], pl.pts[i + 1], pl.arclen[i], pl.arclen[i + 1], q,
                                     d2, s);
                if (d2 > radius * radius) continue;
                fg.at(y, x) = 1;
                bool dropped = false;
                for (const Interval& iv : dropouts)
                    if (s >= iv.lo && s <= iv.hi) dropped = true;
                if (!dropped) bright.at(y, x) = 1;
                else faint.at(y, x) = 1;
            }
    }

    SampleTensors out{Tensor4(1, 1, n, n), Tensor4(1, 2, n, n), 0};
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const real noise = p.noise > 0.0 ? rng.normal(0.0, p.noise) : 0.0;
            // a pixel lit by any intact segment is bright; dropout-only pixels
            // keep a faint residual
            const real lit = bright.at(y, x)
                                 ? 1.0
                                 : (faint.at(y, x) ? p.dropout_residual : 0.0);
            out.image.at(0, 0, y, x) = 0.8 * lit + noise;
            out.mask.at(0, 1, y, x) = fg.at(y, x);
            out.mask.at(0, 0, y, x) = 1.0 - fg.at(y, x);
        }
    out.components = connected_components(fg);
    quantize_f32(out.image);
    return out;
}

SampleTensors make_round_sample(const GenParams& p, Rng& rng) {
    const int n = p.size;
    BinaryMask fg(n, n);

    struct Disk {
        real x, y, r;
    };
    std::vector<Disk> disks;
    const int target = 5 + static_cast<int>(rng.uniform_int(11)); // 5..15
    for (int d = 0; d < target; ++d) {
        for (int attempt = 0; attempt < 200; ++attempt) {
            const real r = rng.uniform(p.radius_min, p.radius_max);
            if (2 * r + 4 >= n) break;
            const real cx = rng.uniform(r + 2, n - 1 - r - 2);
            const real cy = rng.uniform(r + 2, n - 1 - r - 2);
            bool ok = true;
            for (const Disk& o : disks) {
                const real dx = cx - o.x, dy = cy - o.y;
                if (std::sqrt(dx * dx + dy * dy) < r + o.r + 3.0) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                disks.push_back({cx, cy, r});
                break;
            }
        }
    }
    for (const Disk& d : disks) {
        const int x0 = std::max(0, static_cast<int>(std::floor(d.x - d.r)));
        const int x1 = std::min(n - 1, static_cast<int>(std::ceil(d.x + d.r)));
        const int y0 = std::max(0, static_cast<int>(std::floor(d.y - d.r)));
        const int y1 = std::min(n - 1, static_cast<int>(std::ceil(d.y + d.r)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const real dx = x - d.x, dy = y - d.y;
                if (dx * dx + dy * dy <= d.r * d.r) fg.at(y, x) = 1;
            }
    }

    SampleTensors out{Tensor4(1, 1, n, n), Tensor4(1, 2, n, n), 0};
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const real noise = p.noise > 0.0 ? rng.normal(0.0, p.noise) : 0.0;
            out.image.at(0, 0, y, x) = 0.8 * fg.at(y, x) + noise;
            out.mask.at(0, 1, y, x) = fg.at(y, x);
            out.mask.at(0, 0, y, x) = 1.0 - fg.at(y, x);
        }
    out.components = connected_components(fg);
    quantize_f32(out.image);
    return out;
}

const char* kind_str(GenKind k) { return k == GenKind::Tubular ? "tubular" : "round"; }

DatasetManifest generate_impl(const GenParams& p, const std::string& outdir) {
    require(p.n_samples >= 1, "generate: n_samples must be >= 1");
    require(p.size >= 8, "generate: size must be >= 8");
    require(p.noise >= 0.0, "generate: noise must be >= 0");
    require(p.dropout_prob >= 0.0 && p.dropout_prob <= 1.0, "generate: dropout in [0,1]");
    if (p.kind == GenKind::Tubular)
        require(p.thickness >= 1.0 && p.thickness < p.size,
                "generate: thickness must be in [1, size)");
    else
        require(p.radius_min >= 1.0 && p.radius_max >= p.radius_min,
                "generate: bad radius range");

    std::filesystem::create_directories(outdir);
    const std::filesystem::path dir(outdir);

    std::vector<SampleTensors> ts(p.n_samples);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < p.n_samples; ++i) {
        Rng rng(substream(p.seed ^ static_cast<std::uint64_t>(i), stream::data));
        ts[i] = p.kind == GenKind::Tubular ? make_tubular_sample(p, rng)
                                           : make_round_sample(p, rng);
    }

    DatasetManifest manifest;
    manifest.params = p;
    manifest.classes = 2;
    manifest.height = p.size;
    manifest.width = p.size;
    for (int i = 0; i < p.n_samples; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "%04d", i);
        SampleRef ref;
        ref.id = id;
        ref.image = std::string("img_") + id + ".tns";
        ref.mask = std::string("msk_") + id + ".tns";
        ref.components = ts[i].components;
        save_tns((dir / ref.image).string(),
                 {1u, static_cast<std::uint32_t>(p.size), static_cast<std::uint32_t>(p.size)},
                 ts[i].image.v);
        save_tns((dir / ref.mask).string(),
                 {2u, static_cast<std::uint32_t>(p.size), static_cast<std::uint32_t>(p.size)},
                 ts[i].mask.v);
        manifest.samples.push_back(std::move(ref));
    }

    json samples = json::array();
    for (const SampleRef& r : manifest.samples)
        samples.push_back(
            {{"id", r.id}, {"image", r.image}, {"mask", r.mask}, {"components", r.components}});
    json j{{"kind", kind_str(p.kind)},
           {"params",
            {{"n_samples", p.n_samples},
             {"size", p.size},
             {"thickness", p.thickness},
             {"radius_min", p.radius_min},
             {"radius_max", p.radius_max},
             {"noise", p.noise},
             {"dropout_prob", p.dropout_prob},
             {"dropout_len_min", p.dropout_len_min},
             {"dropout_len_max", p.dropout_len_max},
             {"dropout_residual", p.dropout_residual}}},
           {"seed", p.seed},
           {"classes", manifest.classes},
           {"height", manifest.height},
           {"width", manifest.width},
           {"samples", samples}};
    std::ofstream os(dir / "dataset.json");
    if (!os) throw std::runtime_error("cannot write dataset.json in " + outdir);
    os << j.dump(2) << "\n";
    return manifest;
}

} // namespace

DatasetManifest gen_tubular(const GenParams& p, const std::string& outdir) {
    GenParams q = p;
    q.kind = GenKind::Tubular;
    return generate_impl(q, outdir);
}

DatasetManifest gen_round(const GenParams& p, const std::string& outdir) {
    GenParams q = p;
    q.kind = GenKind::Round;
    return generate_impl(q, outdir);
}

DatasetManifest generate_dataset(const GenParams& p, const std::string& outdir) {
    return generate_impl(p, outdir);
}

Dataset load_dataset(const std::string& dir) {
    const std::filesystem::path d(dir);
    std::ifstream is(d / "dataset.json");
    if (!is) throw std::runtime_error("cannot open " + (d / "dataset.json").string());
    json j = json::parse(is);

    Dataset ds;
    ds.classes = j.at("classes").get<int>();
    ds.height = j.at("height").get<int>();
    ds.width = j.at("width").get<int>();
    for (const json& s : j.at("samples")) {
        Sample sample;
        sample.id = s.at("id").get<std::string>();
        const std::string img = (d / s.at("image").get<std::string>()).string();
        const std::string msk = (d / s.at("mask").get<std::string>()).string();
        sample.image = load_sample(img);
        sample.mask = load_sample(msk);
        if (sample.image.shape.h != ds.height || sample.image.shape.w != ds.width)
            throw std::runtime_error(img + ": dims do not match manifest");
        if (sample.mask.shape.c != ds.classes || sample.mask.shape.h != ds.height ||
            sample.mask.shape.w != ds.width)
            throw std::runtime_error(msk + ": dims do not match manifest");
        OneHotMask check(sample.mask, MaskMode::Softmax); // validates binary one-hot
        ds.samples.push_back(std::move(sample));
    }
    return ds;
}

std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(substream(substream(seed, stream::shuffle), static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);
    return order;
}

double estimate_median_thickness(const BinaryMask& mask) {
    const BinaryMask skel = hard_skeleton(mask);
    std::vector<std::uint8_t> bg(mask.v.size());
    for (std::size_t i = 0; i < mask.v.size(); ++i) bg[i] = mask.v[i] ? 0 : 1;
    const std::vector<std::int64_t> d2 = squared_edt(bg, mask.h, mask.w);
    std::vector<double> th;
    for (std::size_t i = 0; i < skel.v.size(); ++i)
        if (skel.v[i]) th.push_back(2.0 * std::sqrt(static_cast<double>(d2[i])) - 1.0);
    if (th.empty()) return 0.0;
    std::sort(th.begin(), th.end());
    return th[th.size() / 2];
}

} // namespace scnp
