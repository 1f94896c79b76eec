#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"

#include "conflab/errors.hpp"
#include "conflab/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"conflab: conformal measures and KMS states of Z-actions"};
    app.require_subcommand(1);
    std::string config_path, out_dir;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "RNG seed (overrides the config)");
    for (const char* cmd : {"spectrum", "construct", "classify", "gibbs", "potential-build", "flow-props"})
        app.add_subcommand(cmd, std::string("run ") + cmd)->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), 1);
    }

    try {
        auto cfg = conflab::load_config(config_path, app.get_subcommands().front()->get_name());
        conflab::apply_precision_override(cfg, std::getenv("CONFLAB_PRECISION"));
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed) cfg.seed = *seed;
        cfg.threads = threads;
        auto outcome = conflab::run(cfg);
        for (const auto& f : outcome.files) std::cout << "wrote " << cfg.out_dir << '/' << f << '\n';
        if (outcome.exit_code == 2) std::cout << "inconclusive: no decided verdicts at this horizon\n";
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
