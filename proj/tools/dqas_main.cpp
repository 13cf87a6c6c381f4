#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "dqas/error.hpp"
#include "dqas/pipeline.hpp"

namespace {

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> output;
};

dqas::PipelineConfig resolve(const Options& o) {
    dqas::PipelineConfig cfg = o.config.empty() ? dqas::PipelineConfig{} : dqas::load_config(o.config);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.workers) cfg.workers = *o.workers;
    if (o.output) cfg.output_dir = *o.output;
    cfg.validate();
    return cfg;
}

void print_status(const dqas::PipelineReport& r) {
    for (const auto& s : r.stages)
        std::cout << to_string(s.stage) << ": " << to_string(s.status) << " (" << s.records << " records)\n";
    if (!r.queries.empty()) {
        std::cout << "lowest energy " << r.query_trace.back();
        if (r.gap) std::cout << ", gap " << *r.gap;
        std::cout << ", solutions " << r.n_solutions << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Training-free architecture search for distributed variational circuits"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "Pipeline config (JSON)");
        sub->add_option("--seed", opt.seed, "Master seed (overrides the config)");
        sub->add_option("--workers", opt.workers, "Worker threads");
        sub->add_option("--output", opt.output, "Output directory (overrides the config)");
    };

    struct Command {
        const char* name;
        const char* help;
        std::optional<dqas::Stage> stage;
    };
    const Command commands[] = {
        {"generate", "Generate K_a random distributed circuits", dqas::Stage::generate},
        {"score-paths", "Rank generated circuits by DAG path count and keep K_p", dqas::Stage::paths},
        {"score-expressibility", "Score path survivors by expressibility and keep K_e", dqas::Stage::expressibility},
        {"train", "Query candidates with multi-restart VQE training", dqas::Stage::train},
        {"pipeline", "Run every stage, resuming from existing output, then report", std::nullopt},
        {"report", "Write histogram, trace and summary CSV files", std::nullopt},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        add_common(sub);
        subs.emplace_back(sub, &c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        for (const auto& [sub, cmd] : subs) {
            if (!sub->parsed()) continue;
            const std::string name = cmd->name;
            const dqas::PipelineConfig cfg = resolve(opt);
            if (name == "report") {
                std::cout << dqas::write_report(cfg.output_dir);
            } else if (name == "pipeline") {
                print_status(dqas::run_pipeline(cfg));
                std::cout << dqas::write_report(cfg.output_dir);
            } else {
                print_status(dqas::run_stage(cfg, *cmd->stage));
            }
        }
    } catch (const dqas::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
