#include "scnp/model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "scnp/io.hpp"
#include "scnp/rng.hpp"

namespace scnp {

using nlohmann::json;

TinyCnn::TinyCnn(int c_in_, int c_out_)
    : c_in(c_in_), c_out(c_out_), k1(kHidden, c_in_, 3, 3), k2(kHidden, kHidden, 3, 3),
      k3(c_out_, kHidden, 1, 1), b1(kHidden, 0.0), b2(kHidden, 0.0), b3(c_out_, 0.0) {
    require(c_in_ >= 1 && c_out_ >= 1, "TinyCnn: channel counts must be positive");
}

void TinyCnn::init(std::uint64_t seed) {
    Rng rng(substream(seed, stream::weights));
    auto he_uniform = [&](Tensor4& k) {
        const real fan_in = static_cast<real>(k.shape.c) * k.shape.h * k.shape.w;
        const real limit = std::sqrt(6.0 / fan_in);
        for (real& w : k.v) w = rng.uniform(-limit, limit);
    };
    he_uniform(k1);
    he_uniform(k2);
    he_uniform(k3);
    std::fill(b1.begin(), b1.end(), 0.0);
    std::fill(b2.begin(), b2.end(), 0.0);
    std::fill(b3.begin(), b3.end(), 0.0);
}

std::size_t TinyCnn::parameter_count() const {
    return k1.size() + k2.size() + k3.size() + b1.size() + b2.size() + b3.size();
}

namespace {

Tensor4 relu(const Tensor4& z) {
    Tensor4 a(z.shape);
    const std::int64_t n = static_cast<std::int64_t>(z.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) a.v[i] = z.v[i] > 0.0 ? z.v[i] : 0.0;
    return a;
}

Tensor4 relu_backward(const Tensor4& z, const Tensor4& upstream) {
    Tensor4 g(z.shape);
    const std::int64_t n = static_cast<std::int64_t>(z.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) g.v[i] = z.v[i] > 0.0 ? upstream.v[i] : 0.0;
    return g;
}

} // namespace

Tensor4 model_forward(const TinyCnn& m, const Tensor4& images, ForwardCache* cache) {
    require(images.shape.c == m.c_in, "model_forward: input channels mismatch");
    Tensor4 z1 = conv2d(images, m.k1, m.b1);
    Tensor4 a1 = relu(z1);
    Tensor4 z2 = conv2d(a1, m.k2, m.b2);
    Tensor4 a2 = relu(z2);
    Tensor4 logits = conv2d(a2, m.k3, m.b3);
    if (cache) {
        cache->input = images;
        cache->z1 = std::move(z1);
        cache->a1 = std::move(a1);
        cache->z2 = std::move(z2);
        cache->a2 = std::move(a2);
    }
    return logits;
}

ModelGrads model_backward(const TinyCnn& m, const ForwardCache& cache, const Tensor4& upstream) {
    ConvGrads g3 = conv2d_backward(cache.a2, m.k3, upstream);
    Tensor4 d2 = relu_backward(cache.z2, g3.input);
    ConvGrads g2 = conv2d_backward(cache.a1, m.k2, d2);
    Tensor4 d1 = relu_backward(cache.z1, g2.input);
    ConvGrads g1 = conv2d_backward(cache.input, m.k1, d1);
    return ModelGrads{std::move(g1.kernel), std::move(g2.kernel), std::move(g3.kernel),
                      std::move(g1.bias),   std::move(g2.bias),   std::move(g3.bias)};
}

namespace {

void save_vector(const std::string& path, const std::vector<real>& v) {
    save_tns(path, {static_cast<std::uint32_t>(v.size())}, v);
}

std::vector<real> load_vector(const std::string& path, std::size_t expect) {
    TnsFile f = load_tns(path);
    if (f.dims.size() != 1 || f.data.size() != expect)
        throw std::runtime_error(path + ": unexpected bias shape");
    return f.data;
}

} // namespace

void save_checkpoint(const TinyCnn& m, const std::string& dir, const std::string& config_echo) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path d(dir);
    save_tensor((d / "conv1.kernel.tns").string(), m.k1);
    save_tensor((d / "conv2.kernel.tns").string(), m.k2);
    save_tensor((d / "conv3.kernel.tns").string(), m.k3);
    save_vector((d / "conv1.bias.tns").string(), m.b1);
    save_vector((d / "conv2.bias.tns").string(), m.b2);
    save_vector((d / "conv3.bias.tns").string(), m.b3);

    json layers = json::array();
    auto layer = [](const char* name, const Tensor4& k, const char* file, const char* bias_file) {
        return json{{"name", name},
                    {"kernel", file},
                    {"bias", bias_file},
                    {"shape", {k.shape.b, k.shape.c, k.shape.h, k.shape.w}}};
    };
    layers.push_back(layer("conv1", m.k1, "conv1.kernel.tns", "conv1.bias.tns"));
    layers.push_back(layer("conv2", m.k2, "conv2.kernel.tns", "conv2.bias.tns"));
    layers.push_back(layer("conv3", m.k3, "conv3.kernel.tns", "conv3.bias.tns"));
    json manifest{{"c_in", m.c_in}, {"c_out", m.c_out}, {"layers", layers}};
    if (!config_echo.empty()) manifest["config"] = json::parse(config_echo);

    std::ofstream os(d / "model.json");
    if (!os) throw std::runtime_error("cannot write model.json in " + dir);
    os << manifest.dump(2) << "\n";
}

TinyCnn load_checkpoint(const std::string& dir) {
    const std::filesystem::path d(dir);
    std::ifstream is(d / "model.json");
    if (!is) throw std::runtime_error("cannot open " + (d / "model.json").string());
    json manifest = json::parse(is);
    TinyCnn m(manifest.at("c_in").get<int>(), manifest.at("c_out").get<int>());
    m.k1 = load_tensor4((d / "conv1.kernel.tns").string());
    m.k2 = load_tensor4((d / "conv2.kernel.tns").string());
    m.k3 = load_tensor4((d / "conv3.kernel.tns").string());
    m.b1 = load_vector((d / "conv1.bias.tns").string(), TinyCnn::kHidden);
    m.b2 = load_vector((d / "conv2.bias.tns").string(), TinyCnn::kHidden);
    m.b3 = load_vector((d / "conv3.bias.tns").string(), static_cast<std::size_t>(m.c_out));
    require(m.k1.shape.c == m.c_in && m.k3.shape.b == m.c_out,
            "load_checkpoint: manifest does not match tensors");
    return m;
}

} // namespace scnp
