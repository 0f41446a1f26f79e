#include "quasiboson/quasiboson.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "checks.hpp"

namespace {

const char* kGoodConfig = R"({
  "space": {"d_a": 4, "d_b": 4, "q": 1.0, "cutoff": 1},
  "phi": {"kind": "block", "m": 2, "modes": 2, "seed": 7},
  "dsf": {"variant": "fermionic_quadratic", "m": 2},
  "n_max": 2,
  "tol": 1e-10
})";

const char* kPairingViolation = R"({
  "space": {"d_a": 2, "d_b": 2, "q": 0.5, "cutoff": 4},
  "phi": {"kind": "one_hot", "modes": 1},
  "dsf": {"variant": "fermionic_quadratic", "m": 2},
  "n_max": 2,
  "tol": 1e-10
})";

std::string take(char* s) {
    std::string out = s ? s : "";
    qb_string_free(s);
    return out;
}

} // namespace

static void verify_runs() {
    qb_report* report = nullptr;
    CHECK_TRUE(qb_verify_run_json(kGoodConfig, -1, -1.0, &report) == QB_OK);
    int passed = 0;
    CHECK_TRUE(qb_report_passed(report, &passed) == QB_OK);
    CHECK_EQ(passed, 1);

    char* json = nullptr;
    CHECK_TRUE(qb_report_to_json(report, &json) == QB_OK);
    const std::string text = take(json);
    CHECK_TRUE(text.find("\"verdict\": \"pass\"") != std::string::npos);
    CHECK_TRUE(text.find("\"paper_ref\"") != std::string::npos);

    char* failures = nullptr;
    CHECK_TRUE(qb_report_failures(report, &failures) == QB_OK);
    CHECK_TRUE(take(failures).empty());
    qb_report_free(report);

    // the depth override is honored (n_max = 1 shrinks the ladder probes)
    qb_report* shallow = nullptr;
    CHECK_TRUE(qb_verify_run_json(kGoodConfig, 1, -1.0, &shallow) == QB_OK);
    qb_report_free(shallow);
}

static void verify_errors() {
    qb_report* report = nullptr;
    CHECK_TRUE(qb_verify_run_json("{ not json", -1, -1.0, &report) == QB_ERR_CONFIG);
    CHECK_TRUE(std::strlen(qb_last_error_message()) > 0);
    CHECK_TRUE(qb_verify_run_json(kPairingViolation, -1, -1.0, &report) == QB_ERR_CONFIG);
    CHECK_TRUE(qb_verify_run_file("/nonexistent/path.cfg", -1, -1.0, &report) == QB_ERR_IO);
    CHECK_TRUE(qb_verify_run_json(nullptr, -1, -1.0, &report) == QB_ERR_CONTRACT);
    CHECK_TRUE(qb_report_passed(nullptr, nullptr) == QB_ERR_CONTRACT);

    // a failing family: run from a config written to disk, exercising the
    // file entry point end to end
    const char* bad_phi = R"({
  "d_a": 2, "d_b": 2, "q": 0.5,
  "modes": [{"alpha": 1, "entries": [
    {"mu": 1, "nu": 1, "re": 0.7071067811865476, "im": 0.0},
    {"mu": 1, "nu": 2, "re": 0.7071067811865476, "im": 0.0}]}]
})";
    {
        std::ofstream f("/tmp/qb_capi_phi.json");
        f << bad_phi;
    }
    const std::string config = R"({
  "space": {"d_a": 2, "d_b": 2, "q": 0.5, "cutoff": 4},
  "phi": {"kind": "file", "path": "/tmp/qb_capi_phi.json"},
  "dsf": {"variant": "q_fermion_square", "q": 0.5},
  "n_max": 3,
  "tol": 1e-10
})";
    {
        std::ofstream f("/tmp/qb_capi_config.json");
        f << config;
    }
    qb_report* failing = nullptr;
    CHECK_TRUE(qb_verify_run_file("/tmp/qb_capi_config.json", -1, -1.0, &failing) == QB_OK);
    int passed = 1;
    qb_report_passed(failing, &passed);
    CHECK_EQ(passed, 0);
    char* failures = nullptr;
    CHECK_TRUE(qb_report_failures(failing, &failures) == QB_OK);
    const std::string lines = take(failures);
    CHECK_TRUE(lines.find("q_structure") != std::string::npos);
    qb_report_free(failing);
}

static void phi_family_surface() {
    qb_phi_family* family = nullptr;
    CHECK_TRUE(qb_phi_generate(4, 4, 2, 2, 7, &family) == QB_OK);
    char* json = nullptr;
    CHECK_TRUE(qb_phi_to_json(family, &json) == QB_OK);
    const std::string text = take(json);
    qb_phi_free(family);
    CHECK_TRUE(text.find("\"d_a\": 4") != std::string::npos);

    qb_phi_family* back = nullptr;
    CHECK_TRUE(qb_phi_from_json(text.c_str(), &back) == QB_OK);
    char* again = nullptr;
    CHECK_TRUE(qb_phi_to_json(back, &again) == QB_OK);
    CHECK_TRUE(take(again) == text);
    qb_phi_free(back);

    // seed -1 requests the undressed block solution
    qb_phi_family* plain = nullptr;
    CHECK_TRUE(qb_phi_generate(2, 2, 1, 2, -1, &plain) == QB_OK);
    char* plain_json = nullptr;
    qb_phi_to_json(plain, &plain_json);
    CHECK_TRUE(take(plain_json).find("\"re\": 1.0") != std::string::npos);
    qb_phi_free(plain);

    qb_phi_family* too_big = nullptr;
    CHECK_TRUE(qb_phi_generate(4, 4, 3, 2, 1, &too_big) == QB_ERR_CAPACITY);
    CHECK_TRUE(qb_phi_from_json("nope", &too_big) == QB_ERR_CONFIG);
}

static void tables_surface() {
    char* csv = nullptr;
    CHECK_TRUE(qb_dsf_table_csv("fermionic_quadratic", 0.0, 2, 1, 1, 2, 4, &csv) == QB_OK);
    CHECK_TRUE(take(csv).find("2,1,0.5,0,0") != std::string::npos);

    CHECK_TRUE(qb_dsf_table_csv("q_fermion_square", 0.5, 1, 1, 1, 2, 4, &csv) == QB_OK);
    const std::string qcsv = take(csv);
    CHECK_TRUE(qcsv.find("2,0.25,") != std::string::npos);
    CHECK_TRUE(qcsv.find("3,0.5625,") != std::string::npos);

    CHECK_TRUE(qb_dsf_table_csv("tabulated", 0.0, 1, 1, 1, 2, 4, &csv) == QB_ERR_CONFIG);
    CHECK_TRUE(qb_dsf_table_csv("unknown", 0.0, 1, 1, 1, 2, 4, &csv) == QB_ERR_CONFIG);

    CHECK_TRUE(qb_ptable_csv(6, &csv) == QB_OK);
    CHECK_TRUE(take(csv).find("2,1,1,0,-2") != std::string::npos);
    CHECK_TRUE(qb_ptable_csv(0, &csv) == QB_ERR_CONTRACT);
}

static void support_surface() {
    CHECK_TRUE(std::strcmp(qb_status_name(QB_OK), "ok") == 0);
    CHECK_TRUE(std::strcmp(qb_status_name(QB_ERR_CAPACITY), "capacity") == 0);
    CHECK_TRUE(std::strlen(qb_api_version()) >= 5);
    qb_string_free(nullptr);  // must be a no-op
    qb_report_free(nullptr);
    qb_phi_free(nullptr);
}

int main() {
    verify_runs();
    verify_errors();
    phi_family_surface();
    tables_surface();
    support_surface();
    std::remove("/tmp/qb_capi_phi.json");
    std::remove("/tmp/qb_capi_config.json");
    return checks::summary("test_capi");
}
