// casimir: interaction energies, force zeros and lattice cross-checks for
// multi-channel mirrors and separable traps.
//
//   casimir channels --preset fig2 --equilibria
//   casimir separable --config my.json --out curve.csv --grid 0.02:3:60:log
//   casimir waveguide --preset cylinder
//   casimir oracle-compare --preset dirichlet-lambda50 --out report.json
//   casimir channels --regression
//
// Exit status: 0 ok, 1 input error, 2 non-convergence (flagged rows are still
// written), 3 regression drift or an oracle row over tolerance.
// CASIMIR_THREADS sets the number of worker threads.

#include "casimir/driver.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace drv = casimir::driver;

int main(int argc, char** argv) {
    CLI::App app{"Casimir interaction energies between rank-1 bodies"};
    app.require_subcommand(1);

    std::string preset_name;
    std::string config_path;
    std::string out_path;
    std::string grid_text;
    double rel_tol = 0.0;
    bool equilibria = false;
    bool regression = false;
    bool list_presets = false;

    struct Command {
        const char* name;
        const char* help;
        drv::Model model;
        bool oracle;
    };
    const Command commands[] = {
        {"channels", "multi-channel field between two rank-1 mirrors", drv::Model::channels, false},
        {"separable", "two separable (non-local) rank-1 potentials", drv::Model::separable, false},
        {"waveguide", "circular waveguide reduced to massive channels", drv::Model::waveguide, false},
        {"oracle-compare", "frequency integral against the lattice zero-point oracle",
         drv::Model::channels, true},
    };
    std::vector<CLI::App*> subs;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        auto* p = sub->add_option("--preset", preset_name, "built-in scenario");
        auto* f = sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
        p->excludes(f);
        sub->add_option("--out", out_path, "output file (CSV curve, or JSON report for oracle-compare)");
        if (!c.oracle) {
            sub->add_flag("--equilibria", equilibria, "locate force zeros, JSON report on stdout");
            sub->add_option("--grid", grid_text, "sample grid LO:HI:N[:log|linear]");
        }
        sub->add_option("--tol", rel_tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
        sub->add_flag("--regression", regression, "re-check pinned reference values");
        sub->add_flag("--list-presets", list_presets, "print preset names");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    std::size_t which = 0;
    while (!subs[which]->parsed()) ++which;
    const Command& cmd = commands[which];

    try {
        if (list_presets) {
            for (const auto& n : drv::preset_names()) std::cout << n << "\n";
            return drv::kExitOk;
        }
        if (regression) return drv::run_regression(cmd.model, cmd.oracle, std::cout);

        if (preset_name.empty() && config_path.empty()) {
            std::cerr << "error: --preset or --config is required\n";
            return drv::kExitInputError;
        }
        drv::RunConfig cfg = preset_name.empty() ? drv::load_config(config_path) : drv::preset(preset_name);
        if (!grid_text.empty()) cfg.grid = drv::parse_grid(grid_text);
        if (rel_tol > 0.0) cfg.quadrature.rel_tol = rel_tol;
        cfg.validate();

        drv::RunOptions opts;
        if (!out_path.empty()) opts.out = out_path;
        opts.equilibria = equilibria;
        return drv::run(cfg, cmd.model, cmd.oracle, opts, std::cout, std::cerr);
    } catch (const casimir::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return drv::kExitInputError;
    }
}
