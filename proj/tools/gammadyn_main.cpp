#include <CLI11.hpp>

#include "gammadyn/cli.hpp"

int main(int argc, char** argv) {
    using gammadyn::cli::RunConfig;

    CLI::App app{"gammadyn: annulus coverability classification and scheduled"
                 " weighted-shift counterexample construction"};
    app.require_subcommand(1);

    RunConfig cfg;
    int k_flag = -1;
    std::uint64_t seed_flag = 0;
    double tol_flag = -1.0, margin_flag = -1.0;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input,-i", cfg.input_path, "input JSON file");
        if (needs_input) in->required();
        sub->add_option("--output,-o", cfg.output_path, "output file (default: stdout)");
        sub->add_option("--config,-c", cfg.config_path, "JSON config file");
        sub->add_option("--k", k_flag, "schedule step count (last step index)");
        sub->add_option("--seed", seed_flag, "random seed recorded in every artifact");
        sub->add_option("--tol", tol_flag, "cover clustering tolerance");
        sub->add_option("--margin", margin_flag, "relative strictness margin for conditions");
    };

    auto* classify = app.add_subcommand("classify", "annulus coverability report");
    add_common(classify, true);
    auto* construct = app.add_subcommand("construct", "build a counterexample bundle");
    add_common(construct, true);
    auto* verify = app.add_subcommand("verify", "recheck every condition and orbit bound");
    add_common(verify, true);
    auto* orbit = app.add_subcommand("orbit", "orbit-error CSV (k,m_k,e_k,b_k,margin)");
    add_common(orbit, true);
    auto* bf = app.add_subcommand("bf-demo", "rotation-times-shift targeting demonstration");
    add_common(bf, false);

    CLI11_PARSE(app, argc, argv);

    try {
        gammadyn::cli::apply_config_file(cfg);
    } catch (const gammadyn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gammadyn::cli::kExitInvalidInput;
    }
    if (k_flag >= 0) cfg.build.K = k_flag;
    if (seed_flag != 0) cfg.build.seed = seed_flag;
    if (tol_flag > 0.0) cfg.build.set.cover_tol = tol_flag;
    if (margin_flag > 0.0) cfg.build.margin_rel = margin_flag;

    if (classify->parsed()) return gammadyn::cli::run_classify(cfg);
    if (construct->parsed()) return gammadyn::cli::run_construct(cfg);
    if (verify->parsed()) return gammadyn::cli::run_verify(cfg);
    if (orbit->parsed()) return gammadyn::cli::run_orbit(cfg);
    if (bf->parsed()) return gammadyn::cli::run_bf_demo(cfg);
    return gammadyn::cli::kExitInvalidInput;
}
