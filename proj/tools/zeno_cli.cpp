#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "zeno/config.hpp"
#include "zeno/runner.hpp"

namespace {

struct Options {
    std::string preset;
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    int threads = 0;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--preset", o.preset, "Parameter preset (wide, narrow)");
    cmd->add_option("--config", o.config, "Key-value config file, for example a manifest.txt from an earlier run");
    cmd->add_option("--set", o.sets, "Override one key, key=value (repeatable)");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--threads", o.threads, "Worker threads for independent simulations")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decay of an emitter watched by a distant detector: quantum Zeno simulation"};
    app.require_subcommand(1);
    Options o;
    struct Sub {
        const char* name;
        const char* help;
        zeno::Mode mode;
    };
    const Sub subs[] = {
        {"run", "Single run: time series, Delta(E), Gamma at the configured m_X", zeno::Mode::Single},
        {"sweep", "Single run plus Gamma and Gamma0 over the m_X sweep", zeno::Mode::Sweep},
        {"converge", "q(T_max) under dt and h refinement", zeno::Mode::Convergence},
        {"crosscheck", "Numeric free overlap q0 against the spectral formula", zeno::Mode::Q0Crosscheck},
    };
    std::vector<std::pair<CLI::App*, zeno::Mode>> commands;
    for (const auto& s : subs) {
        auto* cmd = app.add_subcommand(s.name, s.help);
        add_common(cmd, o);
        commands.emplace_back(cmd, s.mode);
    }
    CLI11_PARSE(app, argc, argv);

    zeno::Mode mode = zeno::Mode::Single;
    for (const auto& [cmd, m] : commands)
        if (cmd->parsed()) mode = m;

    try {
        std::vector<std::string> sets = o.sets;
        sets.push_back("run.mode=" + zeno::mode_name(mode));
        if (!o.out.empty()) sets.push_back("run.output_dir=" + o.out);
        if (o.threads > 0) sets.push_back("run.threads=" + std::to_string(o.threads));
        const auto config =
            zeno::load_config(o.preset.empty() ? std::nullopt : std::optional<std::string>(o.preset),
                              o.config.empty() ? std::nullopt : std::optional<std::string>(o.config), sets);
        const auto report = zeno::run(config);
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
        for (const auto& c : report.checks)
            std::cout << (c.passed ? "pass  " : "FAIL  ") << c.name << " (" << c.detail << ")\n";
        std::cout << "outputs in " << config.output_dir << "\n";
        if (!report.ok()) {
            std::cerr << "failed invariant: " << report.first_failure() << "\n";
            return 1;
        }
        return 0;
    } catch (const zeno::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
