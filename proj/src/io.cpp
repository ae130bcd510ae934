#include "scnp/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace scnp {

namespace {

void put_u32(std::ostream& os, std::uint32_t x) {
    unsigned char b[4] = {static_cast<unsigned char>(x & 0xff),
                          static_cast<unsigned char>((x >> 8) & 0xff),
                          static_cast<unsigned char>((x >> 16) & 0xff),
                          static_cast<unsigned char>((x >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is, const std::string& path) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw std::runtime_error(path + ": truncated TNS1 file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace

void save_tns(const std::string& path, const std::vector<std::uint32_t>& dims,
              const std::vector<real>& data) {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    if (n != data.size())
        throw std::invalid_argument(path + ": dims do not match data length");

    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write("TNS1", 4);
    put_u32(os, static_cast<std::uint32_t>(dims.size()));
    for (auto d : dims) put_u32(os, d);
    for (real x : data) {
        float f = static_cast<float>(x);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32(os, bits);
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

TnsFile load_tns(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "TNS1", 4) != 0)
        throw std::runtime_error(path + ": bad TNS1 magic");
    std::uint32_t rank = get_u32(is, path);
    if (rank == 0 || rank > 8) throw std::runtime_error(path + ": implausible rank");
    TnsFile f;
    f.dims.resize(rank);
    std::size_t n = 1;
    for (auto& d : f.dims) {
        d = get_u32(is, path);
        if (d == 0) throw std::runtime_error(path + ": zero dimension");
        n *= d;
    }
    f.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t bits = get_u32(is, path);
        float x;
        std::memcpy(&x, &bits, 4);
        if (!std::isfinite(x)) throw std::runtime_error(path + ": non-finite value");
        f.data[i] = static_cast<real>(x);
    }
    return f;
}

void save_tensor(const std::string& path, const Tensor4& t) {
    save_tns(path,
             {static_cast<std::uint32_t>(t.shape.b), static_cast<std::uint32_t>(t.shape.c),
              static_cast<std::uint32_t>(t.shape.h), static_cast<std::uint32_t>(t.shape.w)},
             t.v);
}

Tensor4 load_tensor4(const std::string& path) {
    TnsFile f = load_tns(path);
    if (f.dims.size() != 4) throw std::runtime_error(path + ": expected rank 4");
    Tensor4 t(static_cast<int>(f.dims[0]), static_cast<int>(f.dims[1]),
              static_cast<int>(f.dims[2]), static_cast<int>(f.dims[3]));
    t.v = std::move(f.data);
    return t;
}

Tensor4 load_sample(const std::string& path) {
    TnsFile f = load_tns(path);
    if (f.dims.size() != 3) throw std::runtime_error(path + ": expected rank 3");
    Tensor4 t(1, static_cast<int>(f.dims[0]), static_cast<int>(f.dims[1]),
              static_cast<int>(f.dims[2]));
    t.v = std::move(f.data);
    return t;
}

void quantize_f32(Tensor4& t) {
    for (real& x : t.v) x = static_cast<real>(static_cast<float>(x));
}

} // namespace scnp
