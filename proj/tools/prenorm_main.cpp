#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "prenorm/bernoulli_op.hpp"
#include "prenorm/errors.hpp"
#include "prenorm/report_io.hpp"
#include "prenorm/verify.hpp"
#include "prenorm/zetaref.hpp"

namespace {

using namespace prenorm;

constexpr int kExitConfig = 1;
constexpr int kExitEval = 2;
constexpr int kExitResidual = 3;

// Named instances usable without a config file (bernoulli-eval, list-families).
const std::map<std::string, HFamily>& builtin_families() {
    static const std::map<std::string, HFamily> reg = [] {
        std::map<std::string, HFamily> r;
        r.emplace("power", make_power_family());
        r.emplace("hurwitz", make_hurwitz_family());
        r.emplace("eta", make_eta_family());
        r.emplace("chi4", make_character_family(chi_minus4()));
        r.emplace("ehrhart-box2", make_ehrhart_family(Polytope::Box, 2));
        r.emplace("ehrhart-simplex2", make_ehrhart_family(Polytope::Simplex, 2));
        r.emplace("jacobi", make_jacobi_family(0.0, 0.0, 0.5));
        r.emplace("gauss-ideal", make_gauss_ideal_family());
        return r;
    }();
    return reg;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

int print_rows(const std::vector<ResidualRow>& rows) {
    int failures = 0;
    for (const auto& r : rows) {
        std::printf("%-58s %12.3e  bound %8.1e  %s\n", r.name.c_str(), r.value, r.bound,
                    r.pass ? "ok" : "FAIL");
        if (!r.pass) ++failures;
    }
    return failures;
}

int cmd_renormalize(const std::string& config_path, const std::string& out_path,
                    const std::string& format, int rho_flag, bool fallback) {
    nlohmann::json j;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config " << config_path << "\n";
            return kExitConfig;
        }
        try {
            in >> j;
        } catch (const std::exception& e) {
            std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
            return kExitConfig;
        }
    }
    ExperimentConfig cfg;
    try {
        cfg = config_from_json(j);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (rho_flag >= 0) cfg.rho = rho_flag;
    if (!format.empty()) cfg.format = format == "json" ? ReportFormat::Json : ReportFormat::Csv;
    if (!out_path.empty()) cfg.output_path = out_path;
    cfg.engine.fallback_analytic_binomial = fallback;

    FullReport rep;
    try {
        rep = run_experiment(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UnknownFamily& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEval;
    }
    emit(render_report(rep, cfg.format), cfg.output_path.value_or(""));
    return 0;
}

int cmd_fit(const std::string& input_path, const std::string& out_path,
            const std::string& format) {
    nlohmann::json j;
    std::ifstream in(input_path);
    if (!in) {
        std::cerr << "error: cannot open report " << input_path << "\n";
        return kExitConfig;
    }
    try {
        in >> j;
    } catch (const std::exception& e) {
        std::cerr << "error: report is not valid JSON: " << e.what() << "\n";
        return kExitConfig;
    }
    FullReport rep;
    try {
        rep = report_from_json(j);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const auto E = rep.report.expectations();
    if (E.size() < 3) {
        std::cerr << "error: report carries fewer than 3 finite expectations; nothing to fit\n";
        return kExitEval;
    }
    rep.fit = strong_fit(E, rep.config.engine.fit_tol);
    ReportFormat fmt = rep.config.format;
    if (!format.empty()) fmt = format == "json" ? ReportFormat::Json : ReportFormat::Csv;
    emit(render_report(rep, fmt), out_path);
    return 0;
}

int cmd_verify(const std::string& suite) {
    int failures = 0;
    const auto run = [&](const char* name, std::vector<ResidualRow> (*fn)()) {
        std::printf("== %s\n", name);
        failures += print_rows(fn());
    };
    if (suite == "operators" || suite == "all") run("operators", verify_operators);
    if (suite == "oracle" || suite == "all") run("oracle", verify_oracle);
    if (suite == "families" || suite == "all") run("families", verify_families);
    if (suite == "renorm" || suite == "all") run("renorm", verify_renorm);
    if (failures) {
        std::printf("%d residual(s) out of bounds\n", failures);
        return kExitResidual;
    }
    std::printf("all residuals within bounds\n");
    return 0;
}

int cmd_bernoulli_eval(const std::string& family, double s_re, double s_im, double t) {
    const auto& reg = builtin_families();
    const auto it = reg.find(family);
    if (it == reg.end()) {
        std::cerr << "error: unknown family '" << family << "' (see list-families)\n";
        return kExitConfig;
    }
    const HFamily& fam = it->second;
    const Complex s(s_re, s_im);
    try {
        const SeriesEval b = bernoulli_apply(fam, s, t);
        std::printf("B f(s,t)     = %.15g %+.15gi   [%s, %d terms]\n", b.value.real(),
                    b.value.imag(), to_string(b.status), b.terms_used);
        if (s != Complex(0.0, 0.0)) {
            const SeriesEval d = dirichlet_value(fam, Complex(1, 0) - s, t);
            std::printf("D^f(1-s,t)   = %.15g %+.15gi\n", d.value.real(), d.value.imag());
        } else {
            std::printf("D^f(1-s,t)   = pole (sigma = 1)\n");
        }
        if (family == "power" && s != Complex(1.0, 0.0)) {
            const Complex ref = -s * hurwitz_zeta_v(Complex(1, 0) - s, t);
            std::printf("-s zeta(1-s,t) = %.15g %+.15gi   |diff| = %.3e\n", ref.real(), ref.imag(),
                        std::abs(ref - b.value));
        } else {
            BEvalConfig shifted;
            shifted.shift_base = (t >= 30 ? 0 : static_cast<int>(std::ceil(30 - t))) + 7;
            const SeriesEval b2 = bernoulli_apply(fam, s, t, shifted);
            std::printf("pull-back consistency |B(N) - B(N+7)| = %.3e\n",
                        std::abs(b.value - b2.value));
        }
    } catch (const std::exception& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kExitEval;
    }
    return 0;
}

int cmd_list_families() {
    std::printf("%-18s %3s %8s %8s %s\n", "name", "nu", "sigma*", "growth", "closed form");
    for (const auto& [name, fam] : builtin_families()) {
        std::printf("%-18s %3d %8.2f %8.2f %s\n", name.c_str(), fam.nu, fam.sigma_star,
                    fam.growth_exponent, fam.has_closed_form() ? "yes" : "series only");
    }
    std::printf("%-18s %3s %8s %8s %s\n", "grandi", "-", "-", "-",
                "term feed (config only)");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"prenorm: probabilistic renormalization of divergent series"};
    app.require_subcommand(1);

    std::string config_path, out_path, format, suite, family = "power", input_path;
    int rho_flag = -1;
    bool fallback = false;
    double s_re = 2.0, s_im = 0.0, t = 1.0;

    auto* ren = app.add_subcommand("renormalize", "run the pipeline described by a JSON config");
    ren->add_option("--config", config_path, "experiment config (JSON)")->required();
    ren->add_option("--output", out_path, "output path (default: stdout)");
    ren->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    ren->add_option("--rho", rho_flag, "override the rescale exponent")->check(CLI::Range(0, 1));
    ren->add_flag("--fallback-analytic-binomial", fallback,
                  "close geometric difference columns analytically (exploratory)");

    auto* fit = app.add_subcommand("fit", "re-fit S(1-m^c) from an existing JSON report");
    fit->add_option("--input", input_path, "JSON report from renormalize")->required();
    fit->add_option("--output", out_path, "output path (default: stdout)");
    fit->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* ver = app.add_subcommand("verify", "run a built-in invariant suite");
    ver->add_option("suite", suite, "operators | oracle | families | renorm | all")
        ->required()
        ->check(CLI::IsMember({"operators", "oracle", "families", "renorm", "all"}));

    auto* be = app.add_subcommand("bernoulli-eval", "evaluate B f(s,t) and D^f(1-s,t)");
    be->add_option("--family", family, "family name (see list-families)");
    be->add_option("--s", s_re, "Re(s)")->required();
    be->add_option("--s-imag", s_im, "Im(s)");
    be->add_option("--t", t, "evaluation point t > 0")->required();

    app.add_subcommand("list-families", "print the built-in family registry");

    CLI11_PARSE(app, argc, argv);

    if (ren->parsed()) return cmd_renormalize(config_path, out_path, format, rho_flag, fallback);
    if (fit->parsed()) return cmd_fit(input_path, out_path, format);
    if (ver->parsed()) return cmd_verify(suite);
    if (be->parsed()) return cmd_bernoulli_eval(family, s_re, s_im, t);
    return cmd_list_families();
}
