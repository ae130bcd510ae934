#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "scnp/experiments.hpp"
#include "scnp/io.hpp"
#include "scnp/metrics.hpp"
#include "scnp/train.hpp"

using namespace scnp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(is.good());
    return std::string(std::istreambuf_iterator<char>(is), {});
}

void make_dataset(const fs::path& dir, int n, int size, std::uint64_t seed) {
    GenerateArgs g;
    g.params.n_samples = n;
    g.params.size = size;
    g.params.seed = seed;
    g.out = dir.string();
    REQUIRE(cmd_generate(g) == 0);
}

} // namespace

TEST_CASE("generate writes a replayable runspec") {
    const auto dir = fresh_dir("scnp_cli_gen");
    make_dataset(dir, 3, 16, 31);
    REQUIRE(fs::exists(dir / "runspec.json"));
    REQUIRE(fs::exists(dir / "dataset.json"));
    const std::string img_before = slurp(dir / "img_0000.tns");
    REQUIRE(cmd_replay((dir / "runspec.json").string()) == 0);
    CHECK(slurp(dir / "img_0000.tns") == img_before);
}

TEST_CASE("train rejects invalid configurations before training") {
    const auto data = fresh_dir("scnp_cli_data");
    make_dataset(data, 4, 16, 32);
    TrainArgs t;
    t.data = data.string();
    t.out = fresh_dir("scnp_cli_out").string();
    t.cfg.epochs = 1;
    t.cfg.scnp.w = 2; // even: rejected
    CHECK_THROWS_AS(cmd_train(t), std::invalid_argument);
    CHECK_THROWS_WITH_AS(LossFn::parse("nosuch"), doctest::Contains("valid kinds"),
                         std::invalid_argument);
}

TEST_CASE("scnp on with w=1 trains to the same weights as off") {
    const auto data = fresh_dir("scnp_cli_null_data");
    make_dataset(data, 6, 16, 33);
    TrainArgs a;
    a.data = data.string();
    a.cfg.epochs = 2;
    a.cfg.batch_size = 3;
    a.cfg.seed = 5;
    a.cfg.loss = LossFn::parse("cedice");

    const fs::path off_dir = fresh_dir("scnp_cli_null_off");
    a.cfg.scnp = {ScnpMode::Off, 3};
    a.out = off_dir.string();
    REQUIRE(cmd_train(a) == 0);

    const fs::path on_dir = fresh_dir("scnp_cli_null_on");
    a.cfg.scnp = {ScnpMode::ScnpOnly, 1};
    a.out = on_dir.string();
    REQUIRE(cmd_train(a) == 0);

    for (const char* f : {"conv1.kernel.tns", "conv2.kernel.tns", "conv3.kernel.tns",
                          "conv1.bias.tns", "conv2.bias.tns", "conv3.bias.tns"})
        CHECK(slurp(off_dir / f) == slurp(on_dir / f));
}

TEST_CASE("training twice with one seed is bit-identical") {
    const auto data = fresh_dir("scnp_cli_det_data");
    make_dataset(data, 6, 16, 34);
    TrainArgs a;
    a.data = data.string();
    a.cfg.epochs = 2;
    a.cfg.batch_size = 2;
    a.cfg.seed = 7;
    a.cfg.scnp = {ScnpMode::ScnpOnly, 3};
    const fs::path run1 = fresh_dir("scnp_cli_det_1");
    a.out = run1.string();
    REQUIRE(cmd_train(a) == 0);
    const fs::path run2 = fresh_dir("scnp_cli_det_2");
    a.out = run2.string();
    REQUIRE(cmd_train(a) == 0);
    CHECK(slurp(run1 / "convergence.csv") == slurp(run2 / "convergence.csv"));
    CHECK(slurp(run1 / "conv2.kernel.tns") == slurp(run2 / "conv2.kernel.tns"));
}

TEST_CASE("eval against a model's own binarized output is perfect") {
    const auto data = fresh_dir("scnp_cli_eval_data");
    make_dataset(data, 4, 16, 35);
    TrainArgs t;
    t.data = data.string();
    t.cfg.epochs = 1;
    t.cfg.seed = 3;
    t.out = fresh_dir("scnp_cli_eval_model").string();
    REQUIRE(cmd_train(t) == 0);

    // rewrite the dataset masks as the model's own binarized predictions
    const Dataset ds = load_dataset(data.string());
    const TinyCnn model = load_checkpoint(t.out);
    const Tensor4 probs = predict_probabilities(model, ds, ds.mode);
    const auto pseudo = fresh_dir("scnp_cli_eval_pseudo");
    for (const auto& entry : fs::directory_iterator(data))
        fs::copy(entry, pseudo / entry.path().filename());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        Tensor4 mask(1, 2, ds.height, ds.width);
        for (int k = 0; k < 2; ++k) {
            const BinaryMask b = binarize(probs, ds.mode, static_cast<int>(i), k);
            for (int y = 0; y < ds.height; ++y)
                for (int x = 0; x < ds.width; ++x) mask.at(0, k, y, x) = b.at(y, x);
        }
        save_tns((pseudo / ("msk_" + ds.samples[i].id + ".tns")).string(),
                 {2u, static_cast<std::uint32_t>(ds.height), static_cast<std::uint32_t>(ds.width)},
                 mask.v);
    }

    EvalArgs e;
    e.data = pseudo.string();
    e.model = t.out;
    e.out = fresh_dir("scnp_cli_eval_report").string();
    REQUIRE(cmd_eval(e) == 0);
    const auto j = nlohmann::json::parse(slurp(fs::path(e.out) / "metrics.json"));
    CHECK(j.at("dice").at("mean").get<double>() == 1.0);
    CHECK(j.at("betti0_error").at("mean").get<double>() == 0.0);
}

TEST_CASE("eval runspec replays to identical reports") {
    const auto data = fresh_dir("scnp_cli_replay_data");
    make_dataset(data, 3, 16, 36);
    TrainArgs t;
    t.data = data.string();
    t.cfg.epochs = 1;
    t.out = fresh_dir("scnp_cli_replay_model").string();
    REQUIRE(cmd_train(t) == 0);
    EvalArgs e;
    e.data = data.string();
    e.model = t.out;
    e.out = fresh_dir("scnp_cli_replay_report").string();
    REQUIRE(cmd_eval(e) == 0);
    const std::string before = slurp(fs::path(e.out) / "metrics.json");
    REQUIRE(cmd_replay((fs::path(e.out) / "runspec.json").string()) == 0);
    CHECK(slurp(fs::path(e.out) / "metrics.json") == before);
}
