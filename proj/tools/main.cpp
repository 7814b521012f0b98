#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mibci/error.hpp"
#include "mibci/report.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

}  // namespace

int main(int argc, char** argv) {
    using namespace mibci::cli;

    CLI::App app{"Motor-imagery EEG classification with small training sets"};
    app.set_version_flag("--version", std::string(mibci::version()));
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic trial archive");
    synth_cmd->add_option("--out", synth_args.out, "Archive directory to write")->required();
    synth_cmd->add_option("--config", synth_args.config, "Synthetic data config (JSON)");
    synth_cmd->add_option("--seed", synth_args.seed, "Seed (overrides config and MI_SEED)");

    CrossvalArgs cv_args;
    auto* cv_cmd = app.add_subcommand("crossval", "Stratified k-fold cross-validation");
    cv_cmd->add_option("--data", cv_args.data, "Archive directory")->required();
    cv_cmd->add_option("--config", cv_args.config, "Pipeline config (JSON)");
    cv_cmd->add_option("--folds", cv_args.folds, "Number of folds")->capture_default_str();
    cv_cmd->add_option("--seed", cv_args.seed, "Fold and ensemble seed");
    cv_cmd->add_option("--report", cv_args.report, "Report file (JSON)")->required();

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Train on a split and classify the rest");
    run_cmd->add_option("--data", run_args.data, "Archive directory")->required();
    run_cmd->add_option("--train-fraction", run_args.train_fraction, "Fraction of trials (or sessions) for training")
        ->capture_default_str();
    run_cmd->add_flag("--by-session", run_args.by_session, "Split whole sessions instead of trials");
    run_cmd->add_option("--config", run_args.config, "Pipeline config (JSON)");
    run_cmd->add_flag("--sweep", run_args.sweep, "Select CSP band/window by grid search");
    run_cmd->add_flag("--adapt", run_args.adapt, "Session-by-session adaptive classification");
    run_cmd->add_option("--seed", run_args.seed, "Ensemble seed");
    run_cmd->add_option("--report", run_args.report, "Report file (JSON)")->required();

    Fig1Args fig_args;
    auto* fig_cmd = app.add_subcommand("fig1", "Accuracy per method and training fraction");
    fig_cmd->add_option("--data", fig_args.data, "Archive directory")->required();
    fig_cmd->add_option("--fractions", fig_args.fractions, "Training fractions")->delimiter(',');
    fig_cmd->add_option("--methods", fig_args.methods, "Methods, e.g. csp,ar,ar-1ch,lrp-5ch")->delimiter(',');
    fig_cmd->add_option("--config", fig_args.config, "Pipeline config supplying ensemble and channel settings");
    fig_cmd->add_option("--seed", fig_args.seed, "Ensemble seed");
    fig_cmd->add_option("--report", fig_args.report, "Report file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    const std::vector<std::string> flags(argv + 1, argv + argc);
    try {
        if (*synth_cmd) synth(synth_args, flags);
        if (*cv_cmd) crossval(cv_args, flags);
        if (*run_cmd) run(run_args, flags);
        if (*fig_cmd) fig1(fig_args, flags);
    } catch (const mibci::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const mibci::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const mibci::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
