#include "core/dsf.hpp"

#include <cmath>
#include <vector>

#include "core/qerror.hpp"
#include "checks.hpp"

using namespace qb;

static void bracket_values() {
    CHECK_NEAR(q_bracket(0, 0.5), 0.0, 0.0);
    CHECK_NEAR(q_bracket(1, 0.5), 1.0, 0.0);
    CHECK_NEAR(q_bracket(2, 0.5), 0.5, 1e-15);
    CHECK_NEAR(q_bracket(3, 0.5), 0.75, 1e-15);
    CHECK_NEAR(q_bracket(2, 0.0), 1.0, 0.0);
    // q = 1 degenerates to the parity indicator
    for (int n = 0; n <= 6; ++n)
        CHECK_NEAR(q_bracket(n, 1.0), (n % 2 == 0) ? 0.0 : 1.0, 0.0);
    // defining recurrence [n+1] = 1 + (-q) [n] at a negative q
    for (int n = 0; n <= 8; ++n)
        CHECK_NEAR(q_bracket(n + 1, -0.3), 1.0 + 0.3 * q_bracket(n, -0.3), 1e-15);

    CHECK_THROWS_KIND(q_bracket(1, 1.5), ErrorKind::Domain);
    CHECK_THROWS_KIND(q_bracket(1, -1.0), ErrorKind::Domain);
    CHECK_THROWS_KIND(q_bracket(-1, 0.5), ErrorKind::Domain);
}

static void ladder_norms() {
    CHECK_NEAR(ladder_norm_sq(3, 0.5), 0.375, 1e-15);
    CHECK_NEAR(ladder_norm_sq(0, 0.5), 1.0, 0.0);
    // positivity across the open interval, nilpotent collapse only at q = 1
    for (double q : {-0.5, 0.0, 0.5, 0.9})
        for (int k = 0; k <= 6; ++k)
            CHECK_TRUE(ladder_norm_sq(k, q) > 0.0);
    CHECK_NEAR(ladder_norm_sq(1, 1.0), 1.0, 0.0);
    for (int k = 2; k <= 5; ++k)
        CHECK_NEAR(ladder_norm_sq(k, 1.0), 0.0, 0.0);
}

static void quadratic_family() {
    const double expect_m2[] = {0.0, 1.0, 1.0, 0.0, -2.0};
    for (int n = 0; n <= 4; ++n)
        CHECK_NEAR(fermionic_dsf(2, n), expect_m2[n], 0.0);
    // m = 1 is the pure Pauli ladder 0,1,0,-3,...
    CHECK_NEAR(fermionic_dsf(1, 2), 0.0, 0.0);
    CHECK_NEAR(fermionic_dsf(1, 1), 1.0, 0.0);
    // normalization phi(1) = 1 for every m
    for (int m = 1; m <= 6; ++m)
        CHECK_NEAR(fermionic_dsf(m, 1), 1.0, 0.0);
    CHECK_THROWS_KIND(fermionic_dsf(0, 1), ErrorKind::Domain);
}

static void q_fermion_family() {
    CHECK_NEAR(qfermionic_dsf(0.5, 3), 0.5625, 1e-15);
    for (double q : {0.3, 0.5, 0.9})
        for (int n = 0; n <= 6; ++n) {
            const double b = q_bracket(n, q);
            CHECK_NEAR(qfermionic_dsf(q, n), b * b, 1e-15);
            // the three-parameter family at (1, 1, 2) collapses onto it
            CHECK_NEAR(parameterized_dsf(q, 1.0, 1.0, 2.0, n), b * b, 1e-14);
        }
    // q = 0 gives the step function: 0 at n = 0, 1 beyond
    for (int n = 1; n <= 5; ++n)
        CHECK_NEAR(qfermionic_dsf(0.0, n), 1.0, 0.0);
}

static void unified_and_tables() {
    const DsfSpec fm = DsfSpec::fermionic(3);
    for (int n = 0; n <= 5; ++n)
        CHECK_NEAR(unified_dsf(fm, n), fermionic_dsf(3, n), 0.0);
    const DsfSpec qf = DsfSpec::q_fermion(0.7);
    CHECK_NEAR(unified_dsf(qf, 2), qfermionic_dsf(0.7, 2), 0.0);
    const DsfSpec tab = DsfSpec::tabulated({0.0, 1.0, 4.0});
    CHECK_NEAR(unified_dsf(tab, 2), 4.0, 0.0);
    CHECK_THROWS_KIND(unified_dsf(tab, 3), ErrorKind::Range);

    CHECK_NEAR(dsf_energy(fm, 1), 0.5 * (fermionic_dsf(3, 1) + fermionic_dsf(3, 2)), 0.0);
    const std::vector<double> t = dsf_table(fm, 6);
    CHECK_EQ(static_cast<int>(t.size()), 7);
    CHECK_NEAR(t[4], fermionic_dsf(3, 4), 0.0);
}

static void binomials() {
    CHECK_EQ(binomial(21, 10), static_cast<std::int64_t>(352716));
    CHECK_EQ(binomial(5, 0), static_cast<std::int64_t>(1));
    CHECK_EQ(binomial(5, 6), static_cast<std::int64_t>(0));
    CHECK_EQ(binomial(-1, 0), static_cast<std::int64_t>(0));
    CHECK_THROWS_KIND(binomial(70, 35), ErrorKind::Range);
}

static void recurrences() {
    // the quadratic family satisfies the alternating binomial identity exactly;
    // the integer-numerator evaluation confirms residual 0 out to n = 20
    for (int m = 1; m <= 5; ++m) {
        const RecurrenceReport r = check_binomial_recurrence_exact(m, 22);
        CHECK_TRUE(!r.levels.empty());
        CHECK_TRUE(r.levels.back() >= 20);
        CHECK_TRUE(r.max_residual() == 0.0);
        CHECK_TRUE(check_three_term_phi(dsf_table(DsfSpec::fermionic(m), 21)).max_residual() < 1e-12);
        CHECK_TRUE(check_three_term_energy(dsf_table(DsfSpec::fermionic(m), 21)).max_residual() < 1e-12);

        // the double-precision table agrees while cancellation stays benign,
        // and visibly loses the identity by n ~ 20
        CHECK_TRUE(check_binomial_recurrence(dsf_table(DsfSpec::fermionic(m), 11)).max_residual() < 1e-12);
        CHECK_TRUE(check_binomial_recurrence(dsf_table(DsfSpec::fermionic(m), 22)).max_residual() < 1e-7);
    }
    CHECK_THROWS_KIND(check_binomial_recurrence_exact(0, 10), ErrorKind::Domain);
    CHECK_THROWS_KIND(check_binomial_recurrence_exact(2, 60), ErrorKind::Range);

    // negative control: a cubic sequence breaks the identity already at n = 2
    std::vector<double> cubic;
    for (int n = 0; n <= 8; ++n) cubic.push_back(double(n) * n * n);
    const RecurrenceReport bad = check_binomial_recurrence(cubic);
    CHECK_TRUE(bad.residual_at(2) >= 1.0);
    CHECK_NEAR(bad.residual_at(2), 6.0, 1e-12);
    CHECK_THROWS_KIND(bad.residual_at(100), ErrorKind::Range);

    // the squared bracket does not satisfy it (it is not quadratic in n)
    const RecurrenceReport qf = check_binomial_recurrence(dsf_table(DsfSpec::q_fermion(0.5), 12));
    CHECK_TRUE(qf.max_residual() > 1e-3);
}

static void csv_layout() {
    const std::string csv = dsf_table_csv(DsfSpec::fermionic(2), 4);
    CHECK_TRUE(csv.rfind("n,phi,energy,phi_three_term_residual,energy_recurrence_residual\n", 0) == 0);
    CHECK_TRUE(csv.find("\n0,0,0.5,,\n") != std::string::npos);
    CHECK_TRUE(csv.find("\n2,1,0.5,0,0\n") != std::string::npos);
    CHECK_TRUE(csv.find("\n3,0,-1,0,0\n") != std::string::npos);
}

static void variant_names() {
    for (DsfVariant v : {DsfVariant::FermionicQuadratic, DsfVariant::QFermionSquare,
                         DsfVariant::Parameterized, DsfVariant::Tabulated})
        CHECK_TRUE(dsf_variant_from_name(dsf_variant_name(v)) == v);
    CHECK_THROWS_KIND(dsf_variant_from_name("nope"), ErrorKind::Config);
}

static void family_discontinuity() {
    // near q = 1 the squared bracket at n = 2 collapses to ~0; the quadratic
    // family keeps phi(2) = 2 - 2/m, so the two families disagree by at least
    // 1 - 2/m for every m >= 2 (at m = 1 both vanish and they coincide)
    const double near_one = qfermionic_dsf(0.999, 2);
    CHECK_TRUE(std::abs(near_one) < 1e-3);
    CHECK_TRUE(std::abs(near_one - fermionic_dsf(1, 2)) < 1e-3);
    for (int m = 2; m <= 10; ++m)
        CHECK_TRUE(std::abs(near_one - fermionic_dsf(m, 2)) > 0.49);
}

int main() {
    bracket_values();
    ladder_norms();
    quadratic_family();
    q_fermion_family();
    unified_and_tables();
    binomials();
    recurrences();
    csv_layout();
    variant_names();
    family_discontinuity();
    return checks::summary("test_dsf");
}
