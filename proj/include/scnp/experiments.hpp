#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "scnp/datagen.hpp"
#include "scnp/metrics.hpp"
#include "scnp/train.hpp"

namespace scnp {

/// Worker count for independent experiment cells: SCNP_THREADS when set,
/// otherwise the hardware concurrency, never more than n.
int effective_workers(int n_cells);

/// Runs fn(0..n-1) on a small thread pool.  Cells must be independent; when
/// more than one worker runs, each worker pins its OpenMP team to one thread.
void run_parallel_cells(int n, const std::function<void(int)>& fn);

struct CellResult {
    double dice = 0.0, betti0 = 0.0, cldice = 0.0, roundness = 0.0;
    double iter_seconds = 0.0;
    ConvergenceLog log;
};

/// One experiment cell: train on train_dir, evaluate plain predictions on
/// test_dir.
CellResult run_cell(const TrainConfig& cfg, const std::string& train_dir,
                    const std::string& test_dir);

// ---- CLI command surfaces -------------------------------------------------

struct GenerateArgs {
    GenParams params;
    std::string out;
};

struct TrainArgs {
    std::string data;
    std::string val_data; // empty: validate on the training set
    std::string out;
    TrainConfig cfg;
};

struct EvalArgs {
    std::string data;
    std::string model;
    std::string out;
    int closing = 0;
};

struct GradcheckArgs {
    std::string loss = "ce";
    std::string scnp = "off";
    int w = 3;
    std::uint64_t seed = 0;
    std::string act = "softmax";
};

struct SweepArgs {
    std::vector<int> values{1, 3, 5, 7};
    std::vector<double> thicknesses{1.0, 2.0, 3.0};
    int seeds = 3;
    std::string out;
    int n_train = 60, n_test = 20, size = 48, epochs = 12;
};

struct BenchmarkArgs {
    std::string suite = "ablation";
    int seeds = 5;
    std::string out;
    int n_train = 200, n_test = 50, size = 64, epochs = 24;
};

int cmd_generate(const GenerateArgs& a);
int cmd_train(const TrainArgs& a);
int cmd_eval(const EvalArgs& a);
int cmd_gradcheck(const GradcheckArgs& a);
int cmd_sweep(const SweepArgs& a);
int cmd_benchmark(const BenchmarkArgs& a);

/// Re-runs the command recorded in a runspec.json.
int cmd_replay(const std::string& runspec_path);

ScnpMode parse_scnp_mode(const std::string& s);
const char* scnp_mode_str(ScnpMode m);

} // namespace scnp
