#include "scnp/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "scnp/gradcheck.hpp"
#include "scnp/io.hpp"

namespace scnp {

using nlohmann::json;
namespace fs = std::filesystem;

int effective_workers(int n_cells) {
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (const char* env = std::getenv("SCNP_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) workers = v;
    }
    return std::min(workers, std::max(1, n_cells));
}

void run_parallel_cells(int n, const std::function<void(int)>& fn) {
    const int workers = effective_workers(n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t)
        pool.emplace_back([&] {
#ifdef _OPENMP
            omp_set_num_threads(1);
#endif
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

CellResult run_cell(const TrainConfig& cfg, const std::string& train_dir,
                    const std::string& test_dir) {
    const Dataset train_ds = load_dataset(train_dir);
    const Dataset test_ds = load_dataset(test_dir);
    TrainResult tr = train(cfg, train_ds, test_ds);

    Tensor4 allm(static_cast<int>(test_ds.samples.size()), test_ds.classes, test_ds.height,
                 test_ds.width);
    for (std::size_t i = 0; i < test_ds.samples.size(); ++i)
        std::copy(test_ds.samples[i].mask.v.begin(), test_ds.samples[i].mask.v.end(),
                  allm.v.begin() + i * test_ds.samples[i].mask.size());
    const OneHotMask gt(std::move(allm), test_ds.mode);
    const Tensor4 probs = predict_probabilities(tr.model, test_ds, test_ds.mode);
    const MetricsReport rep = evaluate_predictions(probs, gt);

    CellResult res;
    res.dice = rep.dice.mean;
    res.betti0 = rep.betti0.mean;
    res.cldice = rep.cldice.mean;
    res.roundness = rep.roundness.mean;
    res.iter_seconds = tr.mean_iter_seconds;
    res.log = std::move(tr.log);
    return res;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

void write_runspec(const std::string& out, const std::string& command, const json& args) {
    fs::create_directories(out);
    json j{{"command", command}, {"args", args}};
    write_file(fs::path(out) / "runspec.json", j.dump(2) + "\n");
}

GenKind parse_kind(const std::string& s) {
    if (s == "tubular") return GenKind::Tubular;
    if (s == "round") return GenKind::Round;
    throw std::invalid_argument("unknown dataset kind '" + s + "' (tubular, round)");
}

json gen_params_json(const GenParams& p) {
    return json{{"kind", p.kind == GenKind::Tubular ? "tubular" : "round"},
                {"n", p.n_samples},
                {"size", p.size},
                {"thickness", p.thickness},
                {"radius_min", p.radius_min},
                {"radius_max", p.radius_max},
                {"noise", p.noise},
                {"dropout", p.dropout_prob},
                {"dropout_len_min", p.dropout_len_min},
                {"dropout_len_max", p.dropout_len_max},
                {"dropout_residual", p.dropout_residual},
                {"seed", p.seed}};
}

GenParams gen_params_from_json(const json& j) {
    GenParams p;
    p.kind = parse_kind(j.at("kind").get<std::string>());
    p.n_samples = j.at("n").get<int>();
    p.size = j.at("size").get<int>();
    p.thickness = j.at("thickness").get<real>();
    p.radius_min = j.at("radius_min").get<real>();
    p.radius_max = j.at("radius_max").get<real>();
    p.noise = j.at("noise").get<real>();
    p.dropout_prob = j.at("dropout").get<real>();
    p.dropout_len_min = j.at("dropout_len_min").get<int>();
    p.dropout_len_max = j.at("dropout_len_max").get<int>();
    p.dropout_residual = j.at("dropout_residual").get<real>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

json train_cfg_json(const TrainConfig& c) {
    return json{{"epochs", c.epochs},   {"batch", c.batch_size},
                {"lr", c.lr},           {"momentum", c.momentum},
                {"seed", c.seed},       {"loss", c.loss.str()},
                {"scnp", scnp_mode_str(c.scnp.mode)}, {"w", c.scnp.w}};
}

TrainConfig train_cfg_from_json(const json& j) {
    TrainConfig c;
    c.epochs = j.at("epochs").get<int>();
    c.batch_size = j.at("batch").get<int>();
    c.lr = j.at("lr").get<real>();
    c.momentum = j.at("momentum").get<real>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.loss = LossFn::parse(j.at("loss").get<std::string>());
    c.scnp.mode = parse_scnp_mode(j.at("scnp").get<std::string>());
    c.scnp.w = j.at("w").get<int>();
    return c;
}

std::string csv_field(const std::string& s) {
    if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string fmt_short(double x) {
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << x;
    return os.str();
}

struct MeanStd {
    double mean = 0.0, sd = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    MeanStd ms;
    if (xs.empty()) return ms;
    for (double x : xs) ms.mean += x;
    ms.mean /= static_cast<double>(xs.size());
    for (double x : xs) ms.sd += (x - ms.mean) * (x - ms.mean);
    ms.sd = std::sqrt(ms.sd / static_cast<double>(xs.size()));
    return ms;
}

} // namespace

ScnpMode parse_scnp_mode(const std::string& s) {
    if (s == "off") return ScnpMode::Off;
    if (s == "on") return ScnpMode::ScnpOnly;
    if (s == "joint") return ScnpMode::Joint;
    throw std::invalid_argument("unknown scnp mode '" + s + "' (off, on, joint)");
}

const char* scnp_mode_str(ScnpMode m) {
    switch (m) {
    case ScnpMode::Off: return "off";
    case ScnpMode::ScnpOnly: return "on";
    case ScnpMode::Joint: return "joint";
    }
    return "?";
}

int cmd_generate(const GenerateArgs& a) {
    generate_dataset(a.params, a.out);
    write_runspec(a.out, "generate", gen_params_json(a.params));
    return 0;
}

int cmd_train(const TrainArgs& a) {
    a.cfg.validate();
    const Dataset train_ds = load_dataset(a.data);
    const Dataset val_ds = a.val_data.empty() ? train_ds : load_dataset(a.val_data);
    const TrainResult tr = train(a.cfg, train_ds, val_ds);
    fs::create_directories(a.out);
    save_checkpoint(tr.model, a.out, a.cfg.json_echo());
    write_file(fs::path(a.out) / "convergence.csv", tr.log.to_csv());
    json args = train_cfg_json(a.cfg);
    args["data"] = a.data;
    args["val_data"] = a.val_data;
    args["out"] = a.out;
    write_runspec(a.out, "train", args);
    return 0;
}

int cmd_eval(const EvalArgs& a) {
    require(a.closing == 0 || (a.closing >= 1 && a.closing % 2 == 1),
            "eval: closing kernel must be odd");
    const Dataset ds = load_dataset(a.data);
    const TinyCnn model = load_checkpoint(a.model);
    require(model.c_out == ds.classes, "eval: model classes do not match dataset");

    Tensor4 allm(static_cast<int>(ds.samples.size()), ds.classes, ds.height, ds.width);
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
        std::copy(ds.samples[i].mask.v.begin(), ds.samples[i].mask.v.end(),
                  allm.v.begin() + i * ds.samples[i].mask.size());
    const OneHotMask gt(std::move(allm), ds.mode);
    const Tensor4 probs = predict_probabilities(model, ds, ds.mode);
    const MetricsReport rep = evaluate_predictions(probs, gt, a.closing);

    fs::create_directories(a.out);
    write_file(fs::path(a.out) / "metrics.json", rep.to_json());
    write_file(fs::path(a.out) / "metrics.csv", rep.to_csv());
    write_runspec(a.out, "eval",
                  json{{"data", a.data}, {"model", a.model}, {"out", a.out},
                       {"closing", a.closing}});
    return 0;
}

int cmd_gradcheck(const GradcheckArgs& a) {
    const LossFn fn = LossFn::parse(a.loss);
    ScnpConfig cfg;
    cfg.mode = parse_scnp_mode(a.scnp);
    cfg.w = a.w;
    require(a.w >= 1 && a.w % 2 == 1, "gradcheck: w must be odd and positive");
    const MaskMode mode = a.act == "sigmoid" ? MaskMode::Sigmoid : MaskMode::Softmax;
    const GradcheckResult res = gradcheck(fn, cfg, mode, a.seed);
    const real tol = gradcheck_tolerance(fn);
    const bool pass = res.max_rel_err < tol;
    std::cout << "gradcheck loss=" << a.loss << " scnp=" << a.scnp << " w=" << a.w
              << " act=" << a.act << " seed=" << a.seed << ": max_rel_err=" << res.max_rel_err
              << " (tol " << tol << ", worst coord " << res.worst_index
              << ", analytic " << res.analytic << ", numeric " << res.numeric << ") "
              << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 2;
}

int cmd_sweep(const SweepArgs& a) {
    require(!a.values.empty() && !a.thicknesses.empty() && a.seeds >= 1, "sweep: empty factorial");
    for (int w : a.values) require(w >= 1 && w % 2 == 1, "sweep: w values must be odd");
    fs::create_directories(a.out);
    const fs::path out(a.out);

    // one dataset pair per (thickness, seed), shared across w
    struct DataCell {
        std::string train, test;
    };
    std::vector<DataCell> data(a.thicknesses.size() * a.seeds);
    for (std::size_t ti = 0; ti < a.thicknesses.size(); ++ti)
        for (int s = 0; s < a.seeds; ++s) {
            GenParams p;
            p.kind = GenKind::Tubular;
            p.size = a.size;
            p.thickness = a.thicknesses[ti];
            DataCell& dc = data[ti * a.seeds + s];
            dc.train = (out / ("data_t" + std::to_string(ti) + "_s" + std::to_string(s) +
                               "_train")).string();
            dc.test = (out / ("data_t" + std::to_string(ti) + "_s" + std::to_string(s) +
                              "_test")).string();
            p.n_samples = a.n_train;
            p.seed = 101 + 17 * static_cast<std::uint64_t>(ti) * a.seeds + s;
            generate_dataset(p, dc.train);
            p.n_samples = a.n_test;
            p.seed += 5000;
            generate_dataset(p, dc.test);
        }

    struct Run {
        std::size_t wi, ti;
        int seed;
    };
    std::vector<Run> runs;
    for (std::size_t wi = 0; wi < a.values.size(); ++wi)
        for (std::size_t ti = 0; ti < a.thicknesses.size(); ++ti)
            for (int s = 0; s < a.seeds; ++s) runs.push_back({wi, ti, s});

    std::vector<CellResult> results(runs.size());
    run_parallel_cells(static_cast<int>(runs.size()), [&](int i) {
        const Run& r = runs[i];
        TrainConfig cfg;
        cfg.epochs = a.epochs;
        cfg.loss = LossFn::parse("cedice");
        cfg.scnp.mode = ScnpMode::ScnpOnly;
        cfg.scnp.w = a.values[r.wi];
        cfg.seed = static_cast<std::uint64_t>(r.seed);
        const DataCell& dc = data[r.ti * a.seeds + r.seed];
        results[i] = run_cell(cfg, dc.train, dc.test);
    });

    std::ostringstream rows;
    rows.precision(17);
    rows << "w,thickness,seed,dice,betti0_error,cldice,roundness_error\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Run& r = runs[i];
        rows << a.values[r.wi] << "," << a.thicknesses[r.ti] << "," << r.seed << ","
             << results[i].dice << "," << results[i].betti0 << "," << results[i].cldice << ","
             << results[i].roundness << "\n";
    }
    write_file(out / "sweep_runs.csv", rows.str());

    auto cell_values = [&](std::size_t wi, std::size_t ti, auto proj) {
        std::vector<double> xs;
        for (std::size_t i = 0; i < runs.size(); ++i)
            if (runs[i].wi == wi && runs[i].ti == ti) xs.push_back(proj(results[i]));
        return xs;
    };
    auto table = [&](const char* name, auto proj) {
        std::ostringstream t;
        t << "w";
        for (double th : a.thicknesses) t << ",t=" << th;
        t << "\n";
        for (std::size_t wi = 0; wi < a.values.size(); ++wi) {
            t << a.values[wi];
            for (std::size_t ti = 0; ti < a.thicknesses.size(); ++ti) {
                const MeanStd ms = mean_std(cell_values(wi, ti, proj));
                t << "," << fmt_short(ms.mean) << "+-" << fmt_short(ms.sd);
            }
            t << "\n";
        }
        write_file(out / name, t.str());
    };
    table("beta0_table.csv", [](const CellResult& r) { return r.betti0; });
    table("dice_table.csv", [](const CellResult& r) { return r.dice; });
    table("cldice_table.csv", [](const CellResult& r) { return r.cldice; });

    std::ostringstream md;
    md << "# w sensitivity sweep\n\nbeta0 error, mean over " << a.seeds << " seeds\n\n";
    md << "argmin w per thickness:\n\n";
    for (std::size_t ti = 0; ti < a.thicknesses.size(); ++ti) {
        double best = 0.0;
        int best_w = a.values[0];
        for (std::size_t wi = 0; wi < a.values.size(); ++wi) {
            const MeanStd ms = mean_std(cell_values(wi, ti, [](const CellResult& r) {
                return r.betti0;
            }));
            if (wi == 0 || ms.mean < best) {
                best = ms.mean;
                best_w = a.values[wi];
            }
        }
        md << "- thickness " << a.thicknesses[ti] << ": best w = " << best_w
           << " (mean beta0e " << fmt_short(best) << ")\n";
    }
    write_file(out / "sweep.md", md.str());

    write_runspec(a.out, "sweep",
                  json{{"values", a.values},
                       {"thicknesses", a.thicknesses},
                       {"seeds", a.seeds},
                       {"out", a.out},
                       {"n_train", a.n_train},
                       {"n_test", a.n_test},
                       {"size", a.size},
                       {"epochs", a.epochs}});
    std::cout << "sweep complete: " << runs.size() << " runs -> " << a.out << "\n";
    return 0;
}

int cmd_benchmark(const BenchmarkArgs& a) {
    require(a.suite == "ablation", "benchmark: unknown suite '" + a.suite + "'");
    require(a.seeds >= 1, "benchmark: seeds must be >= 1");
    fs::create_directories(a.out);
    const fs::path out(a.out);

    // datasets, one pair per seed
    std::vector<std::string> train_dirs(a.seeds), test_dirs(a.seeds);
    for (int s = 0; s < a.seeds; ++s) {
        GenParams p;
        p.kind = GenKind::Tubular;
        p.size = a.size;
        p.thickness = 2.0;
        p.n_samples = a.n_train;
        p.seed = 301 + static_cast<std::uint64_t>(s);
        train_dirs[s] = (out / ("data_s" + std::to_string(s) + "_train")).string();
        generate_dataset(p, train_dirs[s]);
        p.n_samples = a.n_test;
        p.seed += 7000;
        test_dirs[s] = (out / ("data_s" + std::to_string(s) + "_test")).string();
        generate_dataset(p, test_dirs[s]);
    }

    struct Config {
        std::string loss;
        ScnpMode mode;
    };
    std::vector<Config> configs;
    for (const char* name :
         {"ce", "dice", "cedice", "tversky:beta=0.7", "focal", "cldice:i=4,lambda=0.5",
          "skelrecall", "rwloss"}) {
        configs.push_back({name, ScnpMode::Off});
        configs.push_back({name, ScnpMode::ScnpOnly});
    }
    configs.push_back({"cedice", ScnpMode::Joint});

    struct Run {
        std::size_t ci;
        int seed;
    };
    std::vector<Run> runs;
    for (std::size_t ci = 0; ci < configs.size(); ++ci)
        for (int s = 0; s < a.seeds; ++s) runs.push_back({ci, s});

    std::vector<CellResult> results(runs.size());
    run_parallel_cells(static_cast<int>(runs.size()), [&](int i) {
        const Run& r = runs[i];
        TrainConfig cfg;
        cfg.epochs = a.epochs;
        cfg.loss = LossFn::parse(configs[r.ci].loss);
        cfg.scnp.mode = configs[r.ci].mode;
        cfg.scnp.w = 3;
        cfg.seed = static_cast<std::uint64_t>(r.seed);
        results[i] = run_cell(cfg, train_dirs[r.seed], test_dirs[r.seed]);
    });

    std::ostringstream rows;
    rows.precision(17);
    rows << "loss,scnp,w,seed,dice,betti0_error,cldice,roundness_error\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Run& r = runs[i];
        rows << csv_field(configs[r.ci].loss) << "," << scnp_mode_str(configs[r.ci].mode) << ",3,"
             << r.seed << "," << results[i].dice << "," << results[i].betti0 << ","
             << results[i].cldice << "," << results[i].roundness << "\n";
    }
    write_file(out / "benchmark.csv", rows.str());

    auto config_values = [&](std::size_t ci, auto proj) {
        std::vector<double> xs;
        for (std::size_t i = 0; i < runs.size(); ++i)
            if (runs[i].ci == ci) xs.push_back(proj(results[i]));
        return xs;
    };

    std::ostringstream agg;
    agg.precision(17);
    agg << "loss,scnp,w,dice_mean,dice_std,betti0_mean,betti0_std,cldice_mean,cldice_std,"
           "roundness_mean,roundness_std\n";
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
        const MeanStd d = mean_std(config_values(ci, [](const CellResult& r) { return r.dice; }));
        const MeanStd b = mean_std(config_values(ci, [](const CellResult& r) { return r.betti0; }));
        const MeanStd c = mean_std(config_values(ci, [](const CellResult& r) { return r.cldice; }));
        const MeanStd ro =
            mean_std(config_values(ci, [](const CellResult& r) { return r.roundness; }));
        agg << csv_field(configs[ci].loss) << "," << scnp_mode_str(configs[ci].mode) << ",3," << d.mean
            << "," << d.sd << "," << b.mean << "," << b.sd << "," << c.mean << "," << c.sd << ","
            << ro.mean << "," << ro.sd << "\n";
    }
    write_file(out / "benchmark_aggregate.csv", agg.str());

    // markdown summary with per-loss deltas
    std::ostringstream md;
    md << "# Ablation: standard vs SCNP-penalized logits\n\n";
    md << "| loss | beta0e off | beta0e scnp | delta beta0e | dice off | dice scnp |\n";
    md << "|------|-----------|-------------|--------------|----------|-----------|\n";
    for (std::size_t ci = 0; ci + 1 < configs.size(); ci += 2) {
        const MeanStd b_off =
            mean_std(config_values(ci, [](const CellResult& r) { return r.betti0; }));
        const MeanStd b_on =
            mean_std(config_values(ci + 1, [](const CellResult& r) { return r.betti0; }));
        const MeanStd d_off =
            mean_std(config_values(ci, [](const CellResult& r) { return r.dice; }));
        const MeanStd d_on =
            mean_std(config_values(ci + 1, [](const CellResult& r) { return r.dice; }));
        md << "| " << configs[ci].loss << " | " << fmt_short(b_off.mean) << "+-"
           << fmt_short(b_off.sd) << " | " << fmt_short(b_on.mean) << "+-" << fmt_short(b_on.sd)
           << " | " << fmt_short(b_on.mean - b_off.mean) << " | " << fmt_short(d_off.mean)
           << " | " << fmt_short(d_on.mean) << " |\n";
    }
    {
        const std::size_t ci = configs.size() - 1;
        const MeanStd b =
            mean_std(config_values(ci, [](const CellResult& r) { return r.betti0; }));
        const MeanStd d = mean_std(config_values(ci, [](const CellResult& r) { return r.dice; }));
        md << "\njoint cedice: beta0e " << fmt_short(b.mean) << "+-" << fmt_short(b.sd)
           << ", dice " << fmt_short(d.mean) << "\n";
    }
    write_file(out / "benchmark.md", md.str());

    // wall-clock overhead; timings are machine-dependent, so they live in a
    // separate file that replay does not compare
    std::ostringstream tm;
    tm << "loss,iter_ms_off,iter_ms_scnp,overhead_ms\n";
    for (std::size_t ci = 0; ci + 1 < configs.size(); ci += 2) {
        const MeanStd t_off =
            mean_std(config_values(ci, [](const CellResult& r) { return r.iter_seconds; }));
        const MeanStd t_on =
            mean_std(config_values(ci + 1, [](const CellResult& r) { return r.iter_seconds; }));
        tm << configs[ci].loss << "," << fmt(1e3 * t_off.mean) << "," << fmt(1e3 * t_on.mean)
           << "," << fmt(1e3 * (t_on.mean - t_off.mean)) << "\n";
    }
    write_file(out / "timing.csv", tm.str());

    write_runspec(a.out, "benchmark",
                  json{{"suite", a.suite},
                       {"seeds", a.seeds},
                       {"out", a.out},
                       {"n_train", a.n_train},
                       {"n_test", a.n_test},
                       {"size", a.size},
                       {"epochs", a.epochs}});
    std::cout << "benchmark complete: " << runs.size() << " runs -> " << a.out << "\n";
    return 0;
}

int cmd_replay(const std::string& runspec_path) {
    std::ifstream is(runspec_path);
    if (!is) throw std::runtime_error("cannot open " + runspec_path);
    const json j = json::parse(is);
    const std::string command = j.at("command").get<std::string>();
    const json args = j.at("args");
    if (command == "generate") {
        GenerateArgs a;
        a.params = gen_params_from_json(args);
        a.out = fs::path(runspec_path).parent_path().string();
        return cmd_generate(a);
    }
    if (command == "train") {
        TrainArgs a;
        a.cfg = train_cfg_from_json(args);
        a.data = args.at("data").get<std::string>();
        a.val_data = args.at("val_data").get<std::string>();
        a.out = args.at("out").get<std::string>();
        return cmd_train(a);
    }
    if (command == "eval") {
        EvalArgs a;
        a.data = args.at("data").get<std::string>();
        a.model = args.at("model").get<std::string>();
        a.out = args.at("out").get<std::string>();
        a.closing = args.at("closing").get<int>();
        return cmd_eval(a);
    }
    if (command == "sweep") {
        SweepArgs a;
        a.values = args.at("values").get<std::vector<int>>();
        a.thicknesses = args.at("thicknesses").get<std::vector<double>>();
        a.seeds = args.at("seeds").get<int>();
        a.out = args.at("out").get<std::string>();
        a.n_train = args.at("n_train").get<int>();
        a.n_test = args.at("n_test").get<int>();
        a.size = args.at("size").get<int>();
        a.epochs = args.at("epochs").get<int>();
        return cmd_sweep(a);
    }
    if (command == "benchmark") {
        BenchmarkArgs a;
        a.suite = args.at("suite").get<std::string>();
        a.seeds = args.at("seeds").get<int>();
        a.out = args.at("out").get<std::string>();
        a.n_train = args.at("n_train").get<int>();
        a.n_test = args.at("n_test").get<int>();
        a.size = args.at("size").get<int>();
        a.epochs = args.at("epochs").get<int>();
        return cmd_benchmark(a);
    }
    throw std::invalid_argument("replay: unknown command '" + command + "'");
}

} // namespace scnp
