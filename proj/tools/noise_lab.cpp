#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "noise_lab.hpp"

using namespace noise_lab;
using namespace noise_lab::harness;

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path + ": cannot write");
    out << content;
}

struct VerifyArgs {
    std::string config;
    std::string only = "all";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> backend;
    std::optional<std::size_t> depth;
    bool strict = false;
    bool timings = false;
    std::string json_path;
};

int run_verify(const VerifyArgs& a) {
    const ModelConfig cfg = load_model_config(a.config);
    SuiteOptions opt;
    opt.groups = parse_selection(a.only);
    opt.seed = a.seed.value_or(cfg.seed);
    opt.backend = a.backend ? parse_backend(*a.backend) : cfg.backend;
    opt.depth = a.depth.value_or(cfg.depth);
    if (opt.depth > 20) throw InputError("--depth: at most 20");
    opt.config_name = a.config;
    const Report report = run_verification_suite(cfg, opt);
    std::cout << render_text(report, a.timings);
    if (!a.json_path.empty()) write_file(a.json_path, render_json(report, a.timings));
    return report.exit_code(a.strict);
}

int run_spectrum(const std::string& config, const std::string& vector, const std::string& csv) {
    const SpectrumTable t = emit_spectrum_report(load_model_config(config), vector);
    std::cout << render_spectrum_text(t);
    if (!csv.empty()) write_file(csv, render_spectrum_csv(t));
    return 0;
}

int run_chaos(const std::string& config, const std::optional<std::string>& sub, const std::optional<std::string>& vec) {
    const ModelConfig cfg = load_model_config(config);
    if (sub && !vec) throw InputError("--subalgebra needs --vector");
    const ChaosSummary s = summarize_chaos(cfg, sub, vec);
    std::cout << render_chaos_text(s);
    if (s.bound_holds && !*s.bound_holds) return 1;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification laboratory for noise-type Boolean algebras on finite product spaces"};
    app.require_subcommand(1);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run the verification suite on a model config");
    verify->add_option("config", va.config, "Model config (JSON)")->required();
    verify->add_option("--only", va.only, "Check groups: laws, chaos, spectrum, regopen, geometry or all (comma-separated)");
    verify->add_option("--seed", va.seed, "Seed for the randomized checks (overrides the config)");
    verify->add_option("--backend", va.backend, "exact or float (overrides the config)");
    verify->add_option("--depth", va.depth, "Dyadic depth D for the geometry group (overrides the config)");
    verify->add_flag("--strict", va.strict, "Exit 3 when a check is skipped for size reasons");
    verify->add_flag("--timings", va.timings, "Include per-check wall time (reports are then not reproducible)");
    verify->add_option("--json", va.json_path, "Also write the report as JSON");

    std::string sp_config, sp_vector, sp_csv;
    auto* spectrum = app.add_subcommand("spectrum", "Spectral measure of a named vector");
    spectrum->add_option("config", sp_config, "Model config (JSON)")->required();
    spectrum->add_option("--vector", sp_vector, "Vector name from the config")->required();
    spectrum->add_option("--csv", sp_csv, "Also write the table as CSV");

    std::string ch_config;
    std::optional<std::string> ch_sub, ch_vec;
    auto* chaos = app.add_subcommand("chaos", "First chaos, classification, defect and defect bound");
    chaos->add_option("config", ch_config, "Model config (JSON)")->required();
    chaos->add_option("--subalgebra", ch_sub, "Subalgebra name from the config");
    chaos->add_option("--vector", ch_vec, "Vector name from the config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*verify) return run_verify(va);
        if (*spectrum) return run_spectrum(sp_config, sp_vector, sp_csv);
        if (*chaos) return run_chaos(ch_config, ch_sub, ch_vec);
    } catch (const InputError& e) {
        std::cerr << "noise-lab: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "noise-lab: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
