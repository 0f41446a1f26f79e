#include "quasiboson/quasiboson.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "core/config.hpp"
#include "core/dsf.hpp"
#include "core/expansion.hpp"
#include "core/phi.hpp"
#include "core/qerror.hpp"
#include "core/verify.hpp"

struct qb_report {
    qb::VerificationReport report;
    qb::RunConfig config;
};

struct qb_phi_family {
    qb::PhiFamily family;
};

namespace {

thread_local std::string g_last_error;

qb_status kind_to_status(qb::ErrorKind kind) {
    switch (kind) {
        case qb::ErrorKind::Domain: return QB_ERR_DOMAIN;
        case qb::ErrorKind::Contract: return QB_ERR_CONTRACT;
        case qb::ErrorKind::Capacity: return QB_ERR_CAPACITY;
        case qb::ErrorKind::Range: return QB_ERR_RANGE;
        case qb::ErrorKind::Config: return QB_ERR_CONFIG;
        case qb::ErrorKind::Io: return QB_ERR_IO;
    }
    return QB_ERR_INTERNAL;
}

template <typename Fn>
qb_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return QB_OK;
    } catch (const qb::Error& e) {
        g_last_error = e.what();
        return kind_to_status(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QB_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return QB_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new (std::nothrow) char[s.size() + 1];
    if (!out) return nullptr;
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

qb_status contract_error(const char* msg) {
    g_last_error = msg;
    return QB_ERR_CONTRACT;
}

qb_status run_config(qb::RunConfig config, int n_max_override, double tol_override,
                     qb_report** out) {
    return guarded([&] {
        if (n_max_override >= 0) config.n_max = n_max_override;
        if (tol_override >= 0.0) config.tol = tol_override;
        auto holder = std::make_unique<qb_report>();
        holder->report = qb::full_report(config);
        holder->config = std::move(config);
        *out = holder.release();
    });
}

} // namespace

extern "C" {

qb_status qb_verify_run_json(const char* config_json, int n_max_override,
                             double tol_override, qb_report** out) {
    if (!config_json || !out) return contract_error("null argument");
    qb::RunConfig config;
    const qb_status parsed = guarded([&] { config = qb::config_from_json(config_json); });
    if (parsed != QB_OK) return parsed;
    return run_config(std::move(config), n_max_override, tol_override, out);
}

qb_status qb_verify_run_file(const char* config_path, int n_max_override,
                             double tol_override, qb_report** out) {
    if (!config_path || !out) return contract_error("null argument");
    std::ifstream in(config_path);
    if (!in) {
        g_last_error = std::string("cannot read config file: ") + config_path;
        return QB_ERR_IO;
    }
    std::ostringstream text;
    text << in.rdbuf();
    return qb_verify_run_json(text.str().c_str(), n_max_override, tol_override, out);
}

qb_status qb_report_passed(const qb_report* report, int* out) {
    if (!report || !out) return contract_error("null argument");
    *out = report->report.pass ? 1 : 0;
    return QB_OK;
}

qb_status qb_report_to_json(const qb_report* report, char** out) {
    if (!report || !out) return contract_error("null argument");
    return guarded([&] {
        char* s = dup_string(qb::report_to_json(report->report, report->config));
        if (!s) qb::fail(qb::ErrorKind::Capacity, "out of memory");
        *out = s;
    });
}

qb_status qb_report_failures(const qb_report* report, char** out) {
    if (!report || !out) return contract_error("null argument");
    return guarded([&] {
        std::string lines;
        for (const auto& suite : report->report.suites)
            for (const auto& entry : suite.entries)
                if (!entry.pass)
                    lines += suite.name + ": " + entry.label + "\n";
        char* s = dup_string(lines);
        if (!s) qb::fail(qb::ErrorKind::Capacity, "out of memory");
        *out = s;
    });
}

void qb_report_free(qb_report* report) { delete report; }

qb_status qb_phi_generate(int d_a, int d_b, int m, int n_modes, int64_t seed,
                          qb_phi_family** out) {
    if (!out) return contract_error("null argument");
    return guarded([&] {
        std::optional<std::uint64_t> s;
        if (seed >= 0) s = static_cast<std::uint64_t>(seed);
        auto holder = std::make_unique<qb_phi_family>();
        holder->family = qb::generate_family(d_a, d_b, m, n_modes, s);
        *out = holder.release();
    });
}

qb_status qb_phi_to_json(const qb_phi_family* family, char** out) {
    if (!family || !out) return contract_error("null argument");
    return guarded([&] {
        char* s = dup_string(qb::phi_to_json(family->family));
        if (!s) qb::fail(qb::ErrorKind::Capacity, "out of memory");
        *out = s;
    });
}

qb_status qb_phi_from_json(const char* text, qb_phi_family** out) {
    if (!text || !out) return contract_error("null argument");
    return guarded([&] {
        auto holder = std::make_unique<qb_phi_family>();
        holder->family = qb::phi_from_json(text);
        *out = holder.release();
    });
}

void qb_phi_free(qb_phi_family* family) { delete family; }

qb_status qb_dsf_table_csv(const char* variant, double q, int m, double p1,
                           double p2, double p3, int n_max, char** out) {
    if (!variant || !out) return contract_error("null argument");
    return guarded([&] {
        const qb::DsfVariant v = qb::dsf_variant_from_name(variant);
        qb::DsfSpec spec;
        switch (v) {
            case qb::DsfVariant::FermionicQuadratic:
                spec = qb::DsfSpec::fermionic(m);
                break;
            case qb::DsfVariant::QFermionSquare:
                spec = qb::DsfSpec::q_fermion(q);
                break;
            case qb::DsfVariant::Parameterized:
                spec = qb::DsfSpec::parameterized(q, p1, p2, p3);
                break;
            case qb::DsfVariant::Tabulated:
                qb::fail(qb::ErrorKind::Config,
                         "the tabulated variant has no closed form to tabulate");
        }
        char* s = dup_string(qb::dsf_table_csv(spec, n_max));
        if (!s) qb::fail(qb::ErrorKind::Capacity, "out of memory");
        *out = s;
    });
}

qb_status qb_ptable_csv(int n_max, char** out) {
    if (!out) return contract_error("null argument");
    return guarded([&] {
        // recurrence table and closed forms must agree before anything is
        // emitted; a mismatch is a library defect, not a caller mistake
        const qb::PTable table = qb::p_table(n_max);
        static const int covered[][3] = {{0, 1, 0}, {1, 1, 0}, {1, 1, 1}, {0, 2, 0},
                                         {1, 2, 0}, {1, 2, 1}, {2, 2, 0}, {2, 2, 1},
                                         {2, 2, 2}};
        for (int n = 1; n <= n_max; ++n)
            for (const auto& c : covered) {
                const int k = c[0], l = c[1], j = c[2];
                if (j < std::max(0, k + l - n) || j > std::min(k, l)) continue;
                if (table.at(n, k, l, j) != qb::p_closed_form(n, k, l, j) ||
                    table.at(n, l, k, j) != qb::p_closed_form(n, l, k, j))
                    throw std::runtime_error(
                        "expansion table disagrees with its closed forms at n=" +
                        std::to_string(n));
            }
        char* s = dup_string(qb::p_table_csv(n_max));
        if (!s) qb::fail(qb::ErrorKind::Capacity, "out of memory");
        *out = s;
    });
}

void qb_string_free(char* s) { delete[] s; }

const char* qb_last_error_message(void) { return g_last_error.c_str(); }

const char* qb_status_name(qb_status status) {
    switch (status) {
        case QB_OK: return "ok";
        case QB_ERR_CONFIG: return "config";
        case QB_ERR_DOMAIN: return "domain";
        case QB_ERR_CAPACITY: return "capacity";
        case QB_ERR_CONTRACT: return "contract";
        case QB_ERR_RANGE: return "range";
        case QB_ERR_IO: return "io";
        case QB_ERR_INTERNAL: return "internal";
    }
    return "internal";
}

const char* qb_api_version(void) { return "1.0.0"; }

} // extern "C"
