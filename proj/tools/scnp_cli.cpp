#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "scnp/experiments.hpp"

namespace {

// exit codes: 0 success, 1 validation error, 2 numerical failure
int dispatch(int argc, char** argv) {
    CLI::App app{"same-class neighbor penalization experiments"};
    app.require_subcommand(1);

    scnp::GenerateArgs gen;
    std::string gen_kind = "tubular";
    auto* cgen = app.add_subcommand("generate", "write a synthetic dataset");
    cgen->add_option("--kind", gen_kind, "tubular or round");
    cgen->add_option("--n", gen.params.n_samples, "number of samples");
    cgen->add_option("--size", gen.params.size, "image side length");
    cgen->add_option("--thickness", gen.params.thickness, "tubular structure thickness");
    cgen->add_option("--radius-min", gen.params.radius_min, "round: min radius");
    cgen->add_option("--radius-max", gen.params.radius_max, "round: max radius");
    cgen->add_option("--noise", gen.params.noise, "gaussian noise sigma");
    cgen->add_option("--dropout", gen.params.dropout_prob, "dropout window probability");
    cgen->add_option("--dropout-residual", gen.params.dropout_residual,
                     "intensity fraction kept inside dropout segments");
    cgen->add_option("--seed", gen.params.seed, "generator seed");
    cgen->add_option("--out", gen.out, "output directory")->required();

    scnp::TrainArgs tr;
    std::string tr_loss = "cedice", tr_scnp = "off";
    auto* ctrain = app.add_subcommand("train", "train the small CNN");
    ctrain->add_option("--data", tr.data, "training dataset directory")->required();
    ctrain->add_option("--val-data", tr.val_data, "validation dataset directory");
    ctrain->add_option("--loss", tr_loss, "loss spec, name[:k=v,...]");
    ctrain->add_option("--scnp", tr_scnp, "off, on, or joint");
    ctrain->add_option("--w", tr.cfg.scnp.w, "SCNP window size (odd)");
    ctrain->add_option("--epochs", tr.cfg.epochs, "training epochs");
    ctrain->add_option("--batch", tr.cfg.batch_size, "mini-batch size");
    ctrain->add_option("--lr", tr.cfg.lr, "learning rate");
    ctrain->add_option("--momentum", tr.cfg.momentum, "momentum");
    ctrain->add_option("--seed", tr.cfg.seed, "run seed");
    ctrain->add_option("--out", tr.out, "checkpoint output directory")->required();

    scnp::EvalArgs ev;
    auto* ceval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    ceval->add_option("--data", ev.data, "dataset directory")->required();
    ceval->add_option("--model", ev.model, "checkpoint directory")->required();
    ceval->add_option("--out", ev.out, "report output directory")->required();
    ceval->add_option("--closing", ev.closing, "binary closing kernel (0 = off)");

    scnp::GradcheckArgs gc;
    auto* cgrad = app.add_subcommand("gradcheck", "finite-difference gradient check");
    cgrad->add_option("--loss", gc.loss, "loss spec");
    cgrad->add_option("--scnp", gc.scnp, "off, on, or joint");
    cgrad->add_option("--w", gc.w, "SCNP window size");
    cgrad->add_option("--seed", gc.seed, "fixture seed");
    cgrad->add_option("--act", gc.act, "softmax or sigmoid");

    scnp::SweepArgs sw;
    std::string sw_param = "w";
    auto* csweep = app.add_subcommand("sweep", "w-sensitivity factorial");
    csweep->add_option("--param", sw_param, "swept parameter (only 'w')");
    csweep->add_option("--values", sw.values, "w values")->delimiter(',');
    csweep->add_option("--thicknesses", sw.thicknesses, "structure thicknesses")->delimiter(',');
    csweep->add_option("--seeds", sw.seeds, "seeds per cell");
    csweep->add_option("--n-train", sw.n_train, "training samples per dataset");
    csweep->add_option("--n-test", sw.n_test, "test samples per dataset");
    csweep->add_option("--size", sw.size, "image side length");
    csweep->add_option("--epochs", sw.epochs, "training epochs");
    csweep->add_option("--out", sw.out, "output directory")->required();

    scnp::BenchmarkArgs bm;
    auto* cbench = app.add_subcommand("benchmark", "loss ablation suite");
    cbench->add_option("--suite", bm.suite, "suite name (ablation)");
    cbench->add_option("--seeds", bm.seeds, "seeds per configuration");
    cbench->add_option("--n-train", bm.n_train, "training samples");
    cbench->add_option("--n-test", bm.n_test, "test samples");
    cbench->add_option("--size", bm.size, "image side length");
    cbench->add_option("--epochs", bm.epochs, "training epochs");
    cbench->add_option("--out", bm.out, "output directory")->required();

    std::string runspec;
    auto* creplay = app.add_subcommand("replay", "re-run a recorded runspec.json");
    creplay->add_option("runspec", runspec, "path to runspec.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (cgen->parsed()) {
        gen.params.kind = gen_kind == "round" ? scnp::GenKind::Round : scnp::GenKind::Tubular;
        if (gen_kind != "round" && gen_kind != "tubular")
            throw std::invalid_argument("unknown dataset kind '" + gen_kind +
                                        "' (tubular, round)");
        return scnp::cmd_generate(gen);
    }
    if (ctrain->parsed()) {
        tr.cfg.loss = scnp::LossFn::parse(tr_loss);
        tr.cfg.scnp.mode = scnp::parse_scnp_mode(tr_scnp);
        return scnp::cmd_train(tr);
    }
    if (ceval->parsed()) return scnp::cmd_eval(ev);
    if (cgrad->parsed()) return scnp::cmd_gradcheck(gc);
    if (csweep->parsed()) {
        if (sw_param != "w") throw std::invalid_argument("sweep: only --param w is supported");
        return scnp::cmd_sweep(sw);
    }
    if (cbench->parsed()) return scnp::cmd_benchmark(bm);
    if (creplay->parsed()) return scnp::cmd_replay(runspec);
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const scnp::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
