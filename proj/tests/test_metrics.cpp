#include <cmath>

#include "doctest.h"
#include "reference.hpp"
#include "scnp/metrics.hpp"
#include "scnp/pooling.hpp"
#include "scnp/rng.hpp"

using namespace scnp;

namespace {

BinaryMask random_mask(int h, int w, std::uint64_t seed, double density = 0.4) {
    Rng rng(seed);
    BinaryMask m(h, w);
    for (auto& v : m.v) v = rng.uniform01() < density ? 1 : 0;
    return m;
}

BinaryMask blobby_mask(int h, int w, std::uint64_t seed) {
    Rng rng(seed);
    BinaryMask m(h, w);
    const int blobs = 1 + static_cast<int>(rng.uniform_int(4));
    for (int b = 0; b < blobs; ++b) {
        const int cy = static_cast<int>(rng.uniform_int(h));
        const int cx = static_cast<int>(rng.uniform_int(w));
        const int r = 2 + static_cast<int>(rng.uniform_int(3));
        for (int y = std::max(0, cy - r); y <= std::min(h - 1, cy + r); ++y)
            for (int x = std::max(0, cx - r); x <= std::min(w - 1, cx + r); ++x)
                if ((y - cy) * (y - cy) + (x - cx) * (x - cx) <= r * r) m.at(y, x) = 1;
    }
    return m;
}

} // namespace

TEST_CASE("binarize rules") {
    // one-hot probabilities reproduce the mask
    Tensor4 p(1, 2, 3, 3);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) p.at(0, (x + y) % 2, y, x) = 1.0;
    const BinaryMask m1 = binarize(p, MaskMode::Softmax, 0, 1);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 3; ++x) CHECK(m1.at(y, x) == ((x + y) % 2 == 1 ? 1 : 0));

    // exact 0.5 in sigmoid mode is background
    Tensor4 q(1, 1, 1, 2);
    q.at(0, 0, 0, 0) = 0.5;
    q.at(0, 0, 0, 1) = 0.5000001;
    const BinaryMask m2 = binarize(q, MaskMode::Sigmoid, 0, 0);
    CHECK(m2.at(0, 0) == 0);
    CHECK(m2.at(0, 1) == 1);

    // argmax ties resolve to the lowest channel
    Tensor4 t(1, 3, 1, 1);
    t.at(0, 0, 0, 0) = t.at(0, 1, 0, 0) = t.at(0, 2, 0, 0) = 0.3;
    CHECK(binarize(t, MaskMode::Softmax, 0, 0).at(0, 0) == 1);
    CHECK(binarize(t, MaskMode::Softmax, 0, 1).at(0, 0) == 0);

    // matches a definitional scan on random probabilities
    Rng rng(1);
    Tensor4 r(1, 3, 8, 8);
    for (real& x : r.v) x = rng.uniform01();
    for (int k = 0; k < 3; ++k) {
        const BinaryMask got = binarize(r, MaskMode::Softmax, 0, k);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) {
                int best = 0;
                for (int c = 1; c < 3; ++c)
                    if (r.at(0, c, y, x) > r.at(0, best, y, x)) best = c;
                CHECK(got.at(y, x) == (best == k ? 1 : 0));
            }
    }
}

TEST_CASE("dice coefficient closed forms") {
    BinaryMask a(4, 4), b(4, 4);
    CHECK(dice_coefficient(a, b) == 1.0); // both empty
    for (int i = 0; i < 4; ++i) a.at(0, i) = 1;
    CHECK(dice_coefficient(a, a) == 1.0);
    for (int i = 0; i < 4; ++i) b.at(2, i) = 1;
    CHECK(dice_coefficient(a, b) == 0.0);
    BinaryMask c(4, 4);
    c.at(0, 0) = c.at(0, 1) = c.at(1, 0) = c.at(1, 1) = 1; // overlap 2 with a
    CHECK(dice_coefficient(a, c) == doctest::Approx(0.5));
}

TEST_CASE("connected components conventions and oracle") {
    BinaryMask empty(5, 5);
    CHECK(connected_components(empty) == 0);

    BinaryMask diag(3, 3);
    diag.at(0, 0) = diag.at(1, 1) = 1;
    CHECK(connected_components(diag, Connectivity::Eight) == 1);
    CHECK(connected_components(diag, Connectivity::Four) == 2);

    for (int trial = 0; trial < 200; ++trial) {
        const BinaryMask m = random_mask(16, 16, 1000 + trial);
        CHECK(connected_components(m, Connectivity::Eight) ==
              ref::flood_fill_count(m, Connectivity::Eight));
        CHECK(connected_components(m, Connectivity::Four) ==
              ref::flood_fill_count(m, Connectivity::Four));
    }
}

TEST_CASE("betti0 error") {
    BinaryMask bar(5, 9);
    for (int x = 0; x < 9; ++x) bar.at(2, x) = 1;
    CHECK(betti0_error(bar, bar) == 0);
    BinaryMask split = bar;
    split.at(2, 4) = 0;
    CHECK(betti0_error(split, bar) == 1);
}

TEST_CASE("hard skeleton fixtures") {
    BinaryMask line(5, 7);
    for (int x = 0; x < 7; ++x) line.at(2, x) = 1;
    CHECK(hard_skeleton(line) == line);

    // 3x5 rectangle thins to a 1-px horizontal segment on the middle row
    BinaryMask rect(7, 9);
    for (int y = 2; y <= 4; ++y)
        for (int x = 2; x <= 6; ++x) rect.at(y, x) = 1;
    const BinaryMask sk = hard_skeleton(rect);
    CHECK(connected_components(sk) == 1);
    std::size_t count = 0;
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 9; ++x)
            if (sk.at(y, x)) {
                ++count;
                CHECK(y == 3); // middle row only
            }
    CHECK(count >= 2);
    CHECK(count <= 5);

    // component count is preserved on blobby masks
    for (int trial = 0; trial < 100; ++trial) {
        const BinaryMask m = blobby_mask(24, 24, 2000 + trial);
        const BinaryMask s = hard_skeleton(m);
        CHECK(connected_components(s) == connected_components(m));
        for (std::size_t i = 0; i < m.v.size(); ++i)
            CHECK(s.v[i] <= m.v[i]); // skeleton is a subset
    }
}

TEST_CASE("cldice metric") {
    BinaryMask line(5, 7);
    for (int x = 0; x < 7; ++x) line.at(2, x) = 1;
    CHECK(cldice_metric(line, line) == 1.0);

    BinaryMask empty(5, 7);
    CHECK(cldice_metric(empty, line) == 0.0);
    CHECK(cldice_metric(empty, empty) == 1.0);

    // 9x9 T-shape with the vertical branch missing from the prediction
    BinaryMask t(9, 9), bar(9, 9);
    for (int x = 1; x <= 7; ++x) {
        t.at(2, x) = 1;
        bar.at(2, x) = 1;
    }
    for (int y = 3; y <= 7; ++y) t.at(y, 4) = 1;
    // tprec = 1 (bar skeleton inside the T), tsens = 7/12 of the T skeleton
    CHECK(cldice_metric(bar, t) == doctest::Approx(14.0 / 19.0).epsilon(1e-12));
}

TEST_CASE("roundness: squares score pi/4 exactly under the face rule") {
    BinaryMask sq(10, 10);
    for (int y = 2; y < 8; ++y)
        for (int x = 2; x < 8; ++x) sq.at(y, x) = 1;
    CHECK(roundness_score(sq) == doctest::Approx(3.14159265358979323846 / 4.0).epsilon(1e-12));
    CHECK(roundness_error(sq, sq) == 0.0);
}

TEST_CASE("roundness equals the boundary-walk oracle") {
    // rasterized disk
    BinaryMask disk(20, 20);
    for (int y = 0; y < 20; ++y)
        for (int x = 0; x < 20; ++x)
            if ((y - 9.5) * (y - 9.5) + (x - 9.5) * (x - 9.5) <= 64.0) disk.at(y, x) = 1;
    CHECK(roundness_score(disk) == doctest::Approx(ref::roundness_by_boundary_walk(disk)).epsilon(1e-12));

    for (int trial = 0; trial < 100; ++trial) {
        const BinaryMask m = blobby_mask(20, 20, 3000 + trial);
        CHECK(roundness_score(m) ==
              doctest::Approx(ref::roundness_by_boundary_walk(m)).epsilon(1e-12));
    }
}

TEST_CASE("binary closing") {
    // a one-pixel gap in a line closes with a 3x3 kernel
    BinaryMask gap(5, 9);
    for (int x = 0; x < 9; ++x) gap.at(2, x) = 1;
    gap.at(2, 4) = 0;
    const BinaryMask closed = binary_closing(gap, 3);
    CHECK(closed.at(2, 4) == 1);
    CHECK(connected_components(closed) == 1);

    // idempotence at the fixpoint
    CHECK(binary_closing(closed, 3) == closed);

    // closing never removes foreground
    for (int trial = 0; trial < 50; ++trial) {
        const BinaryMask m = blobby_mask(16, 16, 4000 + trial);
        const BinaryMask c = binary_closing(m, 3);
        for (std::size_t i = 0; i < m.v.size(); ++i) CHECK(c.v[i] >= m.v[i]);
    }
}

TEST_CASE("one closing round equals the tensor-core dilate/erode composition") {
    for (int trial = 0; trial < 50; ++trial) {
        const BinaryMask m = random_mask(12, 12, 5000 + trial, 0.3);
        Tensor4 t(1, 1, 12, 12);
        for (std::size_t i = 0; i < m.v.size(); ++i) t.v[i] = m.v[i];
        const Tensor4 composed = window_min(window_max(t, 3).first, 3).first;
        const BinaryMask once = erode(dilate(m, 3), 3);
        for (std::size_t i = 0; i < m.v.size(); ++i)
            CHECK(static_cast<real>(once.v[i]) == composed.v[i]);
    }
}

TEST_CASE("metrics report on identical predictions") {
    Rng rng(77);
    Tensor4 mask(2, 2, 12, 12);
    for (int b = 0; b < 2; ++b)
        for (int y = 0; y < 12; ++y)
            for (int x = 0; x < 12; ++x) {
                const bool fg = rng.uniform01() < 0.3;
                mask.at(b, fg ? 1 : 0, y, x) = 1.0;
            }
    OneHotMask gt(mask, MaskMode::Softmax);
    const MetricsReport rep = evaluate_predictions(mask, gt);
    CHECK(rep.dice.mean == 1.0);
    CHECK(rep.betti0.mean == 0.0);
    CHECK(rep.cldice.mean == 1.0);
    CHECK(rep.roundness.mean == 0.0);
    const std::string j = rep.to_json();
    for (const char* key : {"\"dice\"", "\"betti0_error\"", "\"cldice\"", "\"roundness_error\"",
                            "\"mean\"", "\"std\"", "\"per_image\""})
        CHECK(j.find(key) != std::string::npos);
}
