#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "scnp/io.hpp"
#include "scnp/rng.hpp"
#include "scnp/tensor.hpp"

using namespace scnp;

namespace {

std::filesystem::path tmp_dir() {
    auto d = std::filesystem::temp_directory_path() / "scnp_io_test";
    std::filesystem::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("tns1 round trip is bit exact after f32 quantization") {
    Rng rng(7);
    Tensor4 t(2, 3, 4, 5);
    for (real& x : t.v) x = rng.normal();
    quantize_f32(t);
    const auto path = (tmp_dir() / "roundtrip.tns").string();
    save_tensor(path, t);
    const Tensor4 u = load_tensor4(path);
    REQUIRE(u.shape == t.shape);
    CHECK(u.v == t.v);
}

TEST_CASE("tns1 rejects bad magic naming the file") {
    const auto path = (tmp_dir() / "bad_magic.tns").string();
    std::ofstream os(path, std::ios::binary);
    os << "NOPE" << std::string(16, '\0');
    os.close();
    CHECK_THROWS_WITH_AS(load_tns(path), doctest::Contains("bad_magic.tns"), std::runtime_error);
}

TEST_CASE("tns1 rejects truncated payload") {
    Tensor4 t(1, 1, 2, 2);
    const auto path = (tmp_dir() / "trunc.tns").string();
    save_tensor(path, t);
    std::filesystem::resize_file(path, 20);
    CHECK_THROWS_AS(load_tns(path), std::runtime_error);
}

TEST_CASE("tns1 rejects dims/data length mismatch on save") {
    CHECK_THROWS_AS(save_tns((tmp_dir() / "x.tns").string(), {2, 2}, std::vector<real>(3)),
                    std::invalid_argument);
}

TEST_CASE("one hot mask validation") {
    Tensor4 m(1, 2, 2, 2);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) m.at(0, 0, y, x) = 1.0;

    CHECK_NOTHROW(OneHotMask(m, MaskMode::Softmax));

    Tensor4 bad = m;
    bad.at(0, 0, 0, 0) = 0.5;
    CHECK_THROWS_AS(OneHotMask(bad, MaskMode::Softmax), std::invalid_argument);

    Tensor4 two = m;
    two.at(0, 1, 0, 0) = 1.0; // two active channels at one pixel
    CHECK_THROWS_AS(OneHotMask(two, MaskMode::Softmax), std::invalid_argument);
    CHECK_NOTHROW(OneHotMask(two, MaskMode::Sigmoid)); // independent channels are fine
}
