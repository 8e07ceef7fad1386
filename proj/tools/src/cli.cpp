#include "ddoco_cli/cli.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddoco/config.hpp"
#include "ddoco/harness.hpp"

namespace ddoco::cli {

namespace {

int report(const Error& e, std::ostream& err) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    const bool config_error = e.code() == ErrorCode::kConfig || e.code() == ErrorCode::kParse;
    return config_error ? kExitConfig : kExitRuntime;
}

void print_summary(const ExperimentResult& result, const std::string& dir, std::ostream& out) {
    const SummaryRow& s = result.summary;
    out << "run " << result.config.name << ": T = " << result.config.horizon << ", mu = " << s.mu
        << ", gamma = " << s.gamma << ", seed = " << s.seed << '\n'
        << "  accumulated cost " << s.accumulated_cost << '\n'
        << "  regret " << s.regret << " (" << s.regret_per_step << " per step)\n"
        << "  path length " << s.path_length << '\n';
    if (s.final_noise_error) out << "  final noise estimate error " << *s.final_noise_error << '\n';
    out << "  output written to " << dir << '\n';
}

int execute(ExperimentConfig config, const std::string& dir, std::ostream& out, std::ostream& err) {
    config.output_dir = dir;
    const ExperimentResult result = run_experiment(config);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    print_summary(result, dir, out);
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Data-driven online convex optimization control experiments", "ddoco"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<Index> mu;
    std::optional<double> gamma;

    auto* run = app.add_subcommand("run", "Run a closed-loop experiment from a JSON config");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--seed", seed, "Noise seed override");
    run->add_option("--out", out_dir, "Output directory override");
    run->add_option("--mu", mu, "Prediction horizon override");
    run->add_option("--gamma", gamma, "Step size override");

    std::string validate_path;
    auto* check = app.add_subcommand("validate", "Parse and validate a config");
    check->add_option("--config", validate_path, "Experiment config (JSON)")->required();

    std::string demo_out = "ddoco_demo";
    auto* demo = app.add_subcommand("demo-siso", "Run the built-in scalar example");
    demo->add_option("--out", demo_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error (usage): " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (run->parsed()) {
            ExperimentConfig config = load_config(config_path);
            if (seed) config.noise.seed = *seed;
            if (mu) config.controller.mu = *mu;
            if (gamma) config.controller.gamma = *gamma;
            std::string dir = out_dir.value_or(config.output_dir);
            if (dir.empty()) dir = "ddoco_out";
            validate(config);
            return execute(config, dir, out, err);
        }
        if (check->parsed()) {
            const ExperimentConfig config = load_config(validate_path);
            validate(config);
            out << "ok: " << config.name << '\n';
            return kExitOk;
        }
        if (demo->parsed()) return execute(siso_demo_config(), demo_out, out, err);
    } catch (const Error& e) {
        return report(e, err);
    } catch (const std::exception& e) {
        err << "error (runtime): " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitConfig;
}

}  // namespace ddoco::cli
