#include <iostream>

#include "CLI11.hpp"
#include "riskcal/cli.hpp"

int main(int argc, char** argv) {
    using riskcal::cli::RunConfig;

    CLI::App app{"Coherent utilities on finite filtered spaces: evaluation, lifts, time-consistency audits"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::size_t grid_n = 0;

    auto common = [&](CLI::App* sub, bool utility) {
        sub->add_option("--space", cfg.space_path, "Space file (JSON)")->required();
        if (utility) sub->add_option("--utility", cfg.utility_path, "Utility file (JSON)")->required();
        sub->add_option("--seed", cfg.seed, "Probe generator seed")->capture_default_str();
        sub->add_option("--tol", cfg.tolerance, "Absolute tolerance")->capture_default_str();
        sub->add_option("--format", cfg.format, "Report format")
            ->check(CLI::IsMember({"text", "csv"}))
            ->capture_default_str();
        sub->add_option("--out", cfg.out_path, "Write the report here instead of stdout");
    };

    auto* validate = app.add_subcommand("validate", "Check masses and the filtration");
    common(validate, false);

    auto* eval = app.add_subcommand("eval", "Evaluate a utility on --x or on random probes");
    common(eval, true);
    eval->add_option("--x", cfg.x, "Payoff (CSV or JSON array)");
    eval->add_option("--probes", cfg.probes, "Random probe count")->capture_default_str();

    auto* lift = app.add_subcommand("lift", "Commonotone lift of F1-measurable f, g");
    common(lift, true);
    lift->add_option("--f", cfg.f, "f per outcome or per F1 block")->required();
    lift->add_option("--g", cfg.g, "g per outcome or per F1 block")->required();
    lift->add_option("--grid-n", grid_n, "Grid resolution (default: conditional resolution)");

    auto* tc = app.add_subcommand("tc-check", "Audit u02 against u01 o u12");
    common(tc, true);
    tc->add_option("--x", cfg.x, "Extra probe placed first");
    tc->add_option("--probes", cfg.probes, "Random probe count")->capture_default_str();

    auto* cone = app.add_subcommand("cone-check", "Decide x in A01 + A12");
    common(cone, true);
    cone->add_option("--x", cfg.x, "Payoff (CSV or JSON array)")->required();
    cone->add_flag("--center", cfg.center, "Shift x by -u02(x) first");

    auto* demo = app.add_subcommand("demo", "Run a built-in demonstration");
    demo->add_option("name", cfg.demo, "incompatibility | multiperiod")
        ->required()
        ->check(CLI::IsMember({"incompatibility", "multiperiod"}));
    demo->add_option("--data-dir", cfg.data_dir, "Directory with the shipped example files");
    demo->add_option("--probes", cfg.probes, "Random probe count")->capture_default_str();
    demo->add_option("--seed", cfg.seed, "Probe generator seed")->capture_default_str();
    demo->add_option("--tol", cfg.tolerance, "Absolute tolerance")->capture_default_str();
    demo->add_option("--format", cfg.format, "Report format")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();
    demo->add_option("--out", cfg.out_path, "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : riskcal::cli::kInputError;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if (grid_n > 0) cfg.grid_n = grid_n;

    const auto outcome = riskcal::cli::run(cfg);
    if (!outcome.error.empty()) std::cerr << "riskcal: " << outcome.error << "\n";
    if (cfg.out_path.empty()) std::cout << outcome.report;
    return outcome.exit_code;
}
