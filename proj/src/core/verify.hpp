#ifndef QB_CORE_VERIFY_HPP
#define QB_CORE_VERIFY_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "composite.hpp"
#include "config.hpp"
#include "dsf.hpp"
#include "fock.hpp"
#include "phi.hpp"
#include "report.hpp"

namespace qb {

// Defining relations of the deformed oscillator evaluated on every ladder
// state (all mode multisets up to n_max): A^dag A and A A^dag against the
// structure-function eigenvalues, cross-mode commutators, the number-operator
// shift, the norm product law, and the matching of Pauli-null levels with
// structure-function zeros. Residuals are per-state normalized by the state
// norm and aggregated as a maximum.
ResidualSet weak_equality_suite(const FockSpace& space, const PhiFamily& family,
                                const DsfSpec& spec, int n_max, double tol = 1e-10);

// phi read off the ladder itself: the norm-square ratio of consecutive level
// states. `defects` measures how far A w_n strays from the line along w_{n-1};
// a vanishing level stops the scan (that is data, not an error).
struct BruteForceResult {
    std::vector<double> values;   // phi_emp(n) for n = 1, 2, ...
    std::vector<double> defects;  // parallelism defect at the same n
    int exhausted_at = -1;        // first null level, -1 if none up to n_max
};
BruteForceResult brute_force_phi(const FockSpace& space, const OperatorPair& pair,
                                 int n_max, double null_tol = 1e-12);

// q = 1 commutator ladder: the cubic-matrix resolution of [Delta, A^dag], the
// decomposition of [A^dag A, Delta], and the n-fold commutators of the
// balance operator F = Delta - 1 + phi(N+1) - phi(N) with A^dag, which must
// annihilate the vacuum exactly when the structure function satisfies the
// binomial recurrence.
ResidualSet commutator_cascade_suite(const FockSpace& space, const Eigen::MatrixXcd& phi,
                                     const DsfSpec& spec, int n_max, double tol = 1e-11);

// q = 1 operator identities: the Delta/epsilon/number commutation relations
// as full matrix equalities, the power-commutator identities for n <= 4, and
// the closed form of the iterated commutators L_n = [..[N, A^dag].., A^dag]
// against their defining recursion on the vacuum.
ResidualSet propositions_suite(const FockSpace& space, const Eigen::MatrixXcd& phi,
                               int n_max, double tol = 1e-11);

struct VerificationReport {
    ModeSpec space;
    int family_modes = 0;
    double f = 0.0;
    DsfSpec dsf;
    int n_max = 0;
    double tol = 0.0;
    std::vector<ResidualSet> suites;
    bool pass = false;
    double wall_ms = 0.0;  // kept in memory only; serialization must be
                           // bit-reproducible across runs
};

// Runs every suite applicable to the configured regime and aggregates the
// verdict. Config inconsistencies (pairing rules, capacity, shapes) surface
// as errors before any suite runs.
VerificationReport full_report(const RunConfig& config);

// { "config": ..., "suites": [ { "name", "paper_ref", "residuals": [
//   {"label", "value", "tol", "pass"} ] } ], "verdict": "pass"|"fail" }
std::string report_to_json(const VerificationReport& report, const RunConfig& config);

} // namespace qb

#endif
