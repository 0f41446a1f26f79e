// Command-line front end over the shared library's C interface. Exit codes:
// 0 = all checks passed, 1 = a relation failed its tolerance, 2 = the run
// could not start (bad config, bad arguments, unreadable file).

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quasiboson/quasiboson.h"

namespace {

// unique_ptr-style guard for strings handed out by the library
struct OwnedString {
    char* ptr = nullptr;
    ~OwnedString() { qb_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

int report_error(const char* where, qb_status status) {
    std::cerr << where << ": " << qb_status_name(status) << " error: "
              << qb_last_error_message() << "\n";
    return 2;
}

int emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        return 2;
    }
    out << text;
    return 0;
}

int cmd_verify(const std::string& config, int n_max, double tol,
               const std::string& out_path) {
    qb_report* report = nullptr;
    const qb_status st = qb_verify_run_file(config.c_str(), n_max, tol, &report);
    if (st != QB_OK) return report_error("verify", st);

    OwnedString json;
    if (qb_report_to_json(report, &json.ptr) != QB_OK) {
        qb_report_free(report);
        return report_error("verify", QB_ERR_INTERNAL);
    }
    const int rc = emit(json.str(), out_path);
    if (rc != 0) {
        qb_report_free(report);
        return rc;
    }

    int passed = 0;
    qb_report_passed(report, &passed);
    if (!passed) {
        OwnedString failures;
        if (qb_report_failures(report, &failures.ptr) == QB_OK)
            std::cerr << "failed relations:\n" << failures.str();
    }
    qb_report_free(report);
    return passed ? 0 : 1;
}

int cmd_generate_phi(int da, int db, int m, int modes, std::int64_t seed,
                     const std::string& out_path) {
    qb_phi_family* family = nullptr;
    const qb_status st = qb_phi_generate(da, db, m, modes, seed, &family);
    if (st != QB_OK) return report_error("generate-phi", st);
    OwnedString json;
    if (qb_phi_to_json(family, &json.ptr) != QB_OK) {
        qb_phi_free(family);
        return report_error("generate-phi", QB_ERR_INTERNAL);
    }
    qb_phi_free(family);
    return emit(json.str(), out_path);
}

int cmd_dsf_table(const std::string& variant, double q, int m, double p1, double p2,
                  double p3, int n_max, const std::string& out_path) {
    OwnedString csv;
    const qb_status st =
        qb_dsf_table_csv(variant.c_str(), q, m, p1, p2, p3, n_max, &csv.ptr);
    if (st != QB_OK) return report_error("dsf-table", st);
    return emit(csv.str(), out_path);
}

int cmd_ptable(int n_max, const std::string& out_path) {
    OwnedString csv;
    const qb_status st = qb_ptable_csv(n_max, &csv.ptr);
    if (st != QB_OK) return report_error("ptable", st);
    return emit(csv.str(), out_path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"composite-quasiboson verification toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int n_max = -1;
    double tol = -1.0;
    auto* verify = app.add_subcommand("verify", "run every applicable check suite");
    verify->add_option("--config", config_path, "run configuration (JSON)")->required();
    verify->add_option("--n-max", n_max, "override the configured probe depth");
    verify->add_option("--tol", tol, "override the configured tolerance");
    verify->add_option("--out", out_path, "report file (default: stdout)");

    int da = 0, db = 0, m = 1, modes = 1;
    std::int64_t seed = -1;
    std::string phi_out;
    auto* gen = app.add_subcommand("generate-phi",
                                   "emit a block solution of the q = 1 system");
    gen->add_option("--da", da, "first-constituent mode count")->required();
    gen->add_option("--db", db, "second-constituent mode count")->required();
    gen->add_option("--m", m, "block size (f = 2/m)");
    gen->add_option("--modes", modes, "number of composite modes");
    gen->add_option("--seed", seed, "RNG seed for the unitary dressing (default: none)");
    gen->add_option("--out", phi_out, "family file (default: stdout)");

    std::string variant = "fermionic_quadratic", table_out;
    double q = 0.5, p1 = 1.0, p2 = 1.0, p3 = 2.0;
    int table_m = 1, table_n_max = 10;
    auto* table = app.add_subcommand("dsf-table",
                                     "tabulate a structure function with residuals");
    table->add_option("--variant", variant,
                      "fermionic_quadratic | q_fermion_square | parameterized");
    table->add_option("--q", q, "deformation parameter");
    table->add_option("--m", table_m, "integer parameter of the quadratic family");
    table->add_option("--p1", p1, "interpolation weight p1");
    table->add_option("--p2", p2, "interpolation weight p2");
    table->add_option("--p3", p3, "interpolation weight p3");
    table->add_option("--n-max", table_n_max, "last tabulated level");
    table->add_option("--out", table_out, "CSV file (default: stdout)");

    int ptable_n_max = 8;
    std::string ptable_out;
    auto* ptable = app.add_subcommand("ptable",
                                      "export the exact expansion-coefficient table");
    ptable->add_option("--n-max", ptable_n_max, "last expanded power");
    ptable->add_option("--out", ptable_out, "CSV file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    int rc = 2;
    if (app.got_subcommand(verify))
        rc = cmd_verify(config_path, n_max, tol, out_path);
    else if (app.got_subcommand(gen))
        rc = cmd_generate_phi(da, db, m, modes, seed, phi_out);
    else if (app.got_subcommand(table))
        rc = cmd_dsf_table(variant, q, table_m, p1, p2, p3, table_n_max, table_out);
    else if (app.got_subcommand(ptable))
        rc = cmd_ptable(ptable_n_max, ptable_out);

    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    std::fprintf(stderr, "elapsed: %.1f ms\n", ms);
    return rc;
}
