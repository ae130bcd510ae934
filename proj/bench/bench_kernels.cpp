// Compares the OpenMP kernel paths against the serial reference scans, both
// for speed and for exact agreement.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "reference.hpp"
#include "scnp/edt.hpp"
#include "scnp/pooling.hpp"
#include "scnp/rng.hpp"
#include "scnp/scnp.hpp"

using namespace scnp;

namespace {

double seconds(const std::function<void()>& fn, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void report(const char* name, double serial, double parallel, bool equal) {
    std::printf("%-22s serial %8.3f ms   kernels %8.3f ms   speedup %5.2fx   %s\n", name,
                1e3 * serial, 1e3 * parallel, serial / parallel, equal ? "match" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const int size = argc > 1 ? std::atoi(argv[1]) : 256;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;
    std::printf("tensor 4x2x%dx%d, %d reps\n", size, size, reps);

    Rng rng(1);
    Tensor4 z(4, 2, size, size);
    for (real& x : z.v) x = rng.normal();
    Tensor4 mask(z.shape);
    for (std::size_t i = 0; i < mask.size(); ++i) mask.v[i] = rng.uniform01() < 0.3 ? 1.0 : 0.0;
    // softmax-style complementary channels per batch item
    const std::size_t plane = z.shape.plane();
    for (int b = 0; b < z.shape.b; ++b)
        for (std::size_t i = 0; i < plane; ++i) {
            const std::size_t fg = (static_cast<std::size_t>(b) * 2 + 1) * plane + i;
            const std::size_t bg = (static_cast<std::size_t>(b) * 2) * plane + i;
            mask.v[bg] = 1.0 - mask.v[fg];
        }
    const OneHotMask y(mask, MaskMode::Softmax);

    {
        Tensor4 a, b;
        const double ts = seconds([&] { a = ref::window_scan(z, 3, true).first; }, reps);
        const double tp = seconds([&] { b = window_min(z, 3).first; }, reps);
        report("window_min w=3", ts, tp, a.v == b.v);
    }
    {
        Tensor4 a, b;
        const double ts = seconds([&] { a = ref::window_scan(z, 7, false).first; }, reps);
        const double tp = seconds([&] { b = window_max(z, 7).first; }, reps);
        report("window_max w=7", ts, tp, a.v == b.v);
    }
    {
        Tensor4 a, b;
        const double ts = seconds([&] { a = ref::scnp_scan(z, y.t, 3).out; }, reps);
        const double tp = seconds([&] { b = scnp_forward(z, y, 3).first; }, reps);
        report("scnp_forward w=3", ts, tp, a.v == b.v);
    }
    {
        std::vector<std::uint8_t> seeds(static_cast<std::size_t>(size) * size);
        for (auto& s : seeds) s = rng.uniform01() < 0.02 ? 1 : 0;
        std::vector<std::int64_t> a, b;
        const int edt_size = std::min(size, 128); // brute force is O(N^2)
        std::vector<std::uint8_t> small(seeds.begin(),
                                        seeds.begin() + static_cast<std::size_t>(edt_size) * edt_size);
        const double ts = seconds([&] { a = ref::edt_bruteforce(small, edt_size, edt_size); }, 1);
        const double tp = seconds([&] { b = squared_edt(small, edt_size, edt_size); }, reps);
        std::string name = "edt " + std::to_string(edt_size) + "^2";
        report(name.c_str(), ts, tp, a == b);
    }
    return 0;
}
