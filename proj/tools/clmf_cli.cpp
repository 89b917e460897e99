#include "clmf/experiment.hpp"

#include <iostream>

#include "CLI11.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Choose-the-Leader mean-field engine"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    int threads = 0;

    for (const auto& name : clmf::pipeline_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " pipeline");
        sub->add_option("--config", config_path, "experiment config (JSON)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "master seed (overrides the config)");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto* sub = app.get_subcommands().front();
    clmf::RunOptions opts;
    opts.out_dir = out_dir;
    if (sub->count("--seed")) opts.seed = seed;
    if (sub->count("--threads")) opts.threads = threads;
    return clmf::run(sub->get_name(), config_path, opts, std::cerr);
}
