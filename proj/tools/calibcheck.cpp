// calibcheck: run named verification suites and golden-table comparisons.
//
// Exit codes: 0 PASS, 1 FAIL or MIXED or runtime breakdown, 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "calib/report.hpp"
#include "calib/suites.hpp"

namespace {

struct Flags {
    std::string config, chart, section, profile, format, out;
    std::string samples, seed, fd_step, tol_algebraic, tol_geometric, tol_verdict;
    bool no_timestamp = false;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "flat key=value config file; flags override it");
    cmd->add_option("--chart", f.chart, "chart name");
    cmd->add_option("--section", f.section, "section spec, e.g. \"sinphi C=1 D=0\" or mu=0.3e1");
    cmd->add_option("--samples", f.samples, "number of sample points");
    cmd->add_option("--seed", f.seed, "mt19937_64 seed");
    cmd->add_option("--fd-step", f.fd_step, "relative finite-difference step");
    cmd->add_option("--tol-algebraic", f.tol_algebraic, "tolerance for algebraic identities");
    cmd->add_option("--tol-geometric", f.tol_geometric, "tolerance for classification tests");
    cmd->add_option("--tol-verdict", f.tol_verdict, "zero threshold of the verdict");
    cmd->add_option("--profile", f.profile, "default, unit, or \"const u=.. v=.. vp=.. vpp=..\"");
    cmd->add_option("--format", f.format, "json or csv");
    cmd->add_option("--out", f.out, "output path; stdout when omitted");
    cmd->add_flag("--no-timestamp", f.no_timestamp, "leave the provenance timestamp empty");
}

calib::SuiteConfig build_config(const Flags& f) {
    calib::SuiteConfig cfg;
    if (!f.config.empty()) calib::load_config_file(cfg, f.config);
    auto apply = [&cfg](const char* key, const std::string& v) {
        if (!v.empty()) cfg.set(key, v);
    };
    apply("chart", f.chart);
    apply("section", f.section);
    apply("samples", f.samples);
    apply("seed", f.seed);
    apply("fd_step", f.fd_step);
    apply("tol_algebraic", f.tol_algebraic);
    apply("tol_geometric", f.tol_geometric);
    apply("tol_verdict", f.tol_verdict);
    apply("profile", f.profile);
    apply("format", f.format);
    apply("out", f.out);
    return cfg;
}

void write_report(const calib::VerificationReport& r, const calib::SuiteConfig& cfg) {
    const double tol = cfg.suite == "octonion" ? cfg.tol_algebraic : cfg.tol_verdict;
    const std::string body = cfg.format == "csv" ? calib::emit_csv(r, tol) : calib::emit_json(r);
    if (cfg.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream os(cfg.out, std::ios::binary);
        if (!os) throw calib::config_error("cannot write " + cfg.out);
        os << body;
    }
    std::string worst;
    double worst_v = -1;
    for (const auto& [k, v] : r.agg_max)
        if (k.rfind("residual.", 0) == 0 && v > worst_v) {
            worst = k;
            worst_v = v;
        }
    std::cerr << r.suite << ": " << calib::to_string(r.verdict);
    if (!worst.empty()) std::cerr << " (max " << worst << " = " << worst_v << ")";
    if (!r.diagnostic.empty()) std::cerr << " " << r.diagnostic;
    std::cerr << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of calibrated subbundle constructions"};
    app.require_subcommand(1);

    Flags vf, tf;
    std::string suite, table;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "suite name")->required();
    add_common(verify, vf);

    auto* tab = app.add_subcommand("table", "compare frame calculus with a golden table");
    tab->add_option("name", table, "golden table name")->required();
    add_common(tab, tf);

    auto* list = app.add_subcommand("list", "list suites, charts and golden tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (list->parsed()) {
            std::cout << "suites:\n";
            for (const auto& s : calib::suite_names()) std::cout << "  " << s << "\n";
            std::cout << "charts:\n";
            for (const auto& c : calib::chart_names()) std::cout << "  " << c << "\n";
            std::cout << "tables:\n";
            for (const auto& t : calib::load_golden_tables()) std::cout << "  " << t.name << " (" << t.chart << ")\n";
            return 0;
        }
        if (verify->parsed()) {
            calib::SuiteConfig cfg = build_config(vf);
            cfg.suite = suite;
            const auto r = calib::run_suite(cfg, !vf.no_timestamp);
            write_report(r, cfg);
            return calib::exit_code(r.verdict);
        }
        calib::SuiteConfig cfg = build_config(tf);
        cfg.suite = "table:" + table;
        const auto r = calib::run_table(table, cfg, !tf.no_timestamp);
        write_report(r, cfg);
        return calib::exit_code(r.verdict);
    } catch (const calib::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
