#ifndef QB_CORE_DSF_HPP
#define QB_CORE_DSF_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "report.hpp"

namespace qb {

// Deformed bracket (1 - (-q)^n) / (1 + q) for q in (-1, 1].
// At q = 1 this degenerates to the parity indicator (1 - (-1)^n) / 2.
double q_bracket(int n, double q);

// Squared norm of the k-fold raised vacuum of a single deformed mode,
// prod_{j=1..k} q_bracket(j, q). Strictly positive for q in (-1, 1) and any k;
// zero for q = 1 once k >= 2 (nilpotent ladder).
double ladder_norm_sq(int k, double q);

// Deformation structure function families for the composite-operator ladder.
enum class DsfVariant {
    FermionicQuadratic,  // (1 + 1/m) n - n^2 / m, integer m >= 1
    QFermionSquare,      // q_bracket(n, q)^2, q in (-1, 1)
    Parameterized,       // three-parameter interpolation, reduces to QFermionSquare at (1,1,2)
    Tabulated,           // explicit values phi(0..)
};

struct DsfSpec {
    DsfVariant variant = DsfVariant::FermionicQuadratic;
    int m = 1;                   // FermionicQuadratic
    double q = 0.0;              // QFermionSquare / Parameterized
    double p1 = 1.0, p2 = 1.0, p3 = 2.0;
    std::vector<double> values;  // Tabulated

    static DsfSpec fermionic(int m);
    static DsfSpec q_fermion(double q);
    static DsfSpec parameterized(double q, double p1, double p2, double p3);
    static DsfSpec tabulated(std::vector<double> values);
};

double fermionic_dsf(int m, int n);
double qfermionic_dsf(double q, int n);
double parameterized_dsf(double q, double p1, double p2, double p3, int n);
double unified_dsf(const DsfSpec& spec, int n);

// Level energy (phi(n) + phi(n+1)) / 2.
double dsf_energy(const DsfSpec& spec, int n);

// phi(0..n_max) as a table.
std::vector<double> dsf_table(const DsfSpec& spec, int n_max);

// Exact binomial coefficient; bails out on ranges that would overflow int64.
std::int64_t binomial(int n, int k);

struct RecurrenceReport {
    std::vector<int> levels;        // n at which the relation was evaluated
    std::vector<double> residuals;  // same order as levels
    std::vector<int> skipped;       // n skipped because of a zero denominator

    double max_residual() const;
    double residual_at(int n) const;  // Range error if n was not evaluated
};

// phi(n+1) = sum_{k=0..n} (-1)^(n-k) binom(n+1, k) phi(k), checked for n >= 2.
// `phi` is a table phi(0..N); the relation is evaluated while n+1 stays in range.
RecurrenceReport check_binomial_recurrence(const std::vector<double>& phi);

// Same relation for the quadratic family, evaluated in integer arithmetic:
// its values are the exact rationals k(m+1-k)/m, and rounding them to double
// first leaves cancellation noise of ~1e-9 near n = 20, drowning the identity.
// Summing the integer numerators instead gives residuals that are exactly 0.
// `top` mirrors the table length above: levels n = 2 .. top-1 are evaluated.
// Range error when m > 100 or top > 40 (int64 headroom).
RecurrenceReport check_binomial_recurrence_exact(int m, int top);

// Three-term forms: phi(n+1) = 2(n+1)/n phi(n) - (n+1)/(n-1) phi(n-1) for n >= 2
// (n = 1 has a zero denominator and is reported as skipped), and the induced
// recurrence on E_n = (phi(n) + phi(n+1))/2 for n >= 1.
RecurrenceReport check_three_term_phi(const std::vector<double>& phi);
RecurrenceReport check_three_term_energy(const std::vector<double>& phi);

// CSV export: header n,phi,energy,phi_three_term_residual,energy_recurrence_residual.
// Rows carry empty residual cells where the relation does not apply.
std::string dsf_table_csv(const DsfSpec& spec, int n_max);

std::string dsf_variant_name(DsfVariant v);
DsfVariant dsf_variant_from_name(const std::string& name);

} // namespace qb

#endif
