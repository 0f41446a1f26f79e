#include "core/verify.hpp"

#include <cmath>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "core/qerror.hpp"
#include "checks.hpp"

using namespace qb;

namespace {

RunConfig block_config() {
    RunConfig c;
    c.space = {4, 4, 1.0, 1};
    c.source = RunConfig::PhiSource::Block;
    c.m = 2;
    c.modes = 2;
    c.seed = 7;
    c.dsf = DsfSpec::fermionic(2);
    c.n_max = 2;
    return c;
}

RunConfig one_hot_config(double q) {
    RunConfig c;
    c.space = {2, 2, q, 5};
    c.source = RunConfig::PhiSource::OneHot;
    c.modes = 2;
    c.dsf = DsfSpec::q_fermion(q);
    c.n_max = 4;
    return c;
}

} // namespace

static void weak_suite_q1() {
    const FockSpace s = FockSpace::build({4, 4, 1.0, 1});
    const PhiFamily fam = generate_family(4, 4, 2, 2, 7);
    const ResidualSet r = weak_equality_suite(s, fam, DsfSpec::fermionic(2), 2);
    if (!r.all_pass())
        for (const auto& e : r.entries)
            if (!e.pass) std::printf("  %s = %.3e\n", e.label.c_str(), e.value);
    CHECK_TRUE(r.all_pass());
    CHECK_TRUE(r.find("cross-mode commutators on ladder states") != nullptr);
    CHECK_TRUE(r.find("raising-lowering eigenvalue on ladder states")->value < 1e-12);

    // a wrong structure function is caught by the eigenvalue entries
    const ResidualSet wrong = weak_equality_suite(s, fam, DsfSpec::fermionic(1), 2);
    CHECK_TRUE(!wrong.all_pass());
}

static void weak_suite_one_hot() {
    for (double q : {0.3, 0.5, 0.9}) {
        const FockSpace s = FockSpace::build({2, 2, q, 5});
        const PhiFamily oh = one_hot_family(2, 2, q, 2);
        const ResidualSet r = weak_equality_suite(s, oh, DsfSpec::q_fermion(q), 4);
        if (!r.all_pass())
            for (const auto& e : r.entries)
                if (!e.pass) std::printf("  q=%.2f %s = %.3e\n", q, e.label.c_str(), e.value);
        CHECK_TRUE(r.all_pass());
    }
}

static void brute_force_oracle() {
    // q = 1, m = 2: phi matches the quadratic family and exhausts at its zero
    const FockSpace s = FockSpace::build({4, 4, 1.0, 1});
    const PhiFamily fam = generate_family(4, 4, 2, 2, 7);
    for (int a = 0; a < 2; ++a) {
        const OperatorPair pair = build_quasiboson(s, fam.mats[a], a);
        const BruteForceResult bf = brute_force_phi(s, pair, 3);
        CHECK_EQ(static_cast<int>(bf.values.size()), 2);
        CHECK_NEAR(bf.values[0], fermionic_dsf(2, 1), 1e-10);
        CHECK_NEAR(bf.values[1], fermionic_dsf(2, 2), 1e-10);
        CHECK_TRUE(bf.defects[0] < 1e-10 && bf.defects[1] < 1e-10);
        CHECK_EQ(bf.exhausted_at, 3);
        CHECK_NEAR(fermionic_dsf(2, 3), 0.0, 0.0);
    }

    // q < 1 one-hot: phi matches the squared bracket, no exhaustion
    const FockSpace soft = FockSpace::build({2, 2, 0.5, 5});
    const PhiFamily oh = one_hot_family(2, 2, 0.5, 1);
    const BruteForceResult bf = brute_force_phi(soft, build_quasiboson(soft, oh.mats[0]), 4);
    CHECK_EQ(bf.exhausted_at, -1);
    for (int n = 1; n <= 4; ++n)
        CHECK_NEAR(bf.values[n - 1], qfermionic_dsf(0.5, n), 1e-10);

    CHECK_THROWS_KIND(brute_force_phi(soft, build_quasiboson(soft, oh.mats[0]), 6),
                      ErrorKind::Contract);
}

static void cascade_suite() {
    const FockSpace s = FockSpace::build({4, 4, 1.0, 1});
    const PhiFamily fam = generate_family(4, 4, 2, 2, 7);
    const ResidualSet r = commutator_cascade_suite(s, fam.mats[0], DsfSpec::fermionic(2), 4);
    if (!r.all_pass())
        for (const auto& e : r.entries)
            if (!e.pass) std::printf("  %s = %.3e\n", e.label.c_str(), e.value);
    CHECK_TRUE(r.all_pass());

    // corrupting phi(3) by 0.1 surfaces as exactly that residual at depth 2
    const DsfSpec bad = DsfSpec::tabulated({0.0, 1.0, 1.0, 0.1, -2.0, -5.0});
    const ResidualSet broken = commutator_cascade_suite(s, fam.mats[0], bad, 3);
    CHECK_TRUE(!broken.all_pass());
    const ResidualEntry* level2 = broken.find("ladder cascade annihilates the vacuum (n=2)");
    CHECK_TRUE(level2 != nullptr);
    CHECK_NEAR(level2->value, 0.1, 1e-9);
    CHECK_TRUE(level2->value > 0.05);

    const FockSpace soft = FockSpace::build({2, 2, 0.5, 2});
    CHECK_THROWS_KIND(commutator_cascade_suite(soft, fam.mats[0], bad, 2), ErrorKind::Contract);
}

static void proposition_suite() {
    const FockSpace s = FockSpace::build({4, 4, 1.0, 1});
    const PhiFamily fam = generate_family(4, 4, 2, 2, 7);
    for (int a = 0; a < 2; ++a) {
        const ResidualSet r = propositions_suite(s, fam.mats[a], 4);
        if (!r.all_pass())
            for (const auto& e : r.entries)
                if (!e.pass) std::printf("  mode=%d %s = %.3e\n", a, e.label.c_str(), e.value);
        CHECK_TRUE(r.all_pass());
    }
}

static void report_and_json() {
    const RunConfig config = block_config();
    const VerificationReport rep = full_report(config);
    CHECK_TRUE(rep.pass);
    CHECK_NEAR(rep.f, 1.0, 1e-12);
    CHECK_EQ(rep.family_modes, 2);

    // serialized shape: config echo, suites with exactly four keys per residual
    const nlohmann::json j = nlohmann::json::parse(report_to_json(rep, config));
    CHECK_TRUE(j.at("verdict") == "pass");
    CHECK_TRUE(j.at("config").at("space").at("d_a") == 4);
    CHECK_TRUE(j.at("suites").is_array() && !j.at("suites").empty());
    for (const auto& suite : j.at("suites")) {
        CHECK_TRUE(suite.contains("name") && suite.contains("paper_ref") &&
                   suite.contains("residuals"));
        for (const auto& e : suite.at("residuals")) {
            CHECK_TRUE(e.size() == 4);
            CHECK_TRUE(e.contains("label") && e.contains("value") && e.contains("tol") &&
                       e.contains("pass"));
        }
    }
    // wall-clock time must not leak into the serialization
    CHECK_TRUE(report_to_json(rep, config).find("wall") == std::string::npos);

    const VerificationReport soft = full_report(one_hot_config(0.5));
    CHECK_TRUE(soft.pass);
    CHECK_NEAR(soft.f, 2.0, 1e-12);
}

static void config_round_trip() {
    const RunConfig config = block_config();
    const RunConfig back = config_from_json(config_to_json(config));
    CHECK_EQ(back.space.d_a, config.space.d_a);
    CHECK_NEAR(back.space.q, config.space.q, 0.0);
    CHECK_TRUE(back.source == config.source);
    CHECK_EQ(back.m, config.m);
    CHECK_EQ(back.modes, config.modes);
    CHECK_TRUE(back.seed.has_value() && *back.seed == 7);
    CHECK_TRUE(back.dsf.variant == config.dsf.variant);
    CHECK_EQ(back.n_max, config.n_max);
    CHECK_NEAR(back.tol, config.tol, 0.0);
    // and the serialization itself is a fixed point
    CHECK_TRUE(config_to_json(back) == config_to_json(config));

    CHECK_THROWS_KIND(config_from_json("{"), ErrorKind::Config);
    CHECK_THROWS_KIND(config_from_json("{}"), ErrorKind::Config);
}

static void config_validation() {
    RunConfig pairing = one_hot_config(0.5);
    pairing.dsf = DsfSpec::fermionic(2);
    CHECK_THROWS_KIND(validate_config(pairing), ErrorKind::Config);

    RunConfig mismatch = one_hot_config(0.5);
    mismatch.dsf = DsfSpec::q_fermion(0.7);
    CHECK_THROWS_KIND(validate_config(mismatch), ErrorKind::Config);

    RunConfig quad_on_soft = block_config();
    quad_on_soft.space.q = 0.5;
    quad_on_soft.space.cutoff = 3;
    CHECK_THROWS_KIND(validate_config(quad_on_soft), ErrorKind::Config);

    RunConfig deep = one_hot_config(0.5);
    deep.n_max = 9;  // beyond the cutoff headroom
    CHECK_THROWS_KIND(validate_config(deep), ErrorKind::Config);

    RunConfig shallow = block_config();
    shallow.dsf = DsfSpec::tabulated({0.0, 1.0});
    CHECK_THROWS_KIND(validate_config(shallow), ErrorKind::Config);
}

static void thread_determinism() {
    // the weak suite parallelizes per state; the serialized report must be
    // byte-identical no matter the thread count
    const RunConfig config = block_config();
    setenv("QB_THREADS", "1", 1);
    const std::string one = report_to_json(full_report(config), config);
    setenv("QB_THREADS", "4", 1);
    const std::string four = report_to_json(full_report(config), config);
    unsetenv("QB_THREADS");
    CHECK_TRUE(one == four);
    CHECK_TRUE(one == report_to_json(full_report(config), config));
}

int main() {
    weak_suite_q1();
    weak_suite_one_hot();
    brute_force_oracle();
    cascade_suite();
    proposition_suite();
    report_and_json();
    config_round_trip();
    config_validation();
    thread_determinism();
    return checks::summary("test_verify");
}
