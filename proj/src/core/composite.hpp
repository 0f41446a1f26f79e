#ifndef QB_CORE_COMPOSITE_HPP
#define QB_CORE_COMPOSITE_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dsf.hpp"
#include "fock.hpp"
#include "phi.hpp"
#include "report.hpp"

namespace qb {

// Composite raising/lowering pair for one mode label alpha:
//   raise = sum_{mu,nu} Phi(mu,nu) a^dag_mu b^dag_nu,   lower = adjoint(raise).
struct OperatorPair {
    int alpha = 0;
    Operator raise;
    Operator lower;
};

OperatorPair build_quasiboson(const FockSpace& space, const Eigen::MatrixXcd& phi,
                              int alpha = 0);

// Commutator deviation from the canonical relation,
//   [A_a, A^dag_b] = delta_ab - Delta_ab,
// assembled in normal-ordered form:
//   Delta_ab = sum conj(Phi_a(mu,nu)) Phi_b(mu',nu) a^dag_mu' a_mu
//            + sum conj(Phi_a(mu,nu)) Phi_b(mu,nu') b^dag_nu' b_nu.
// The normal-ordered form presumes undeformed constituents; q < 1 spaces are
// rejected (compute the commutator directly there instead).
Operator delta_operator(const FockSpace& space, const Eigen::MatrixXcd& phi_a,
                        const Eigen::MatrixXcd& phi_b);

// epsilon = 1 - Delta_aa = [A, A^dag]
Operator epsilon_operator(const FockSpace& space, const Eigen::MatrixXcd& phi);

// Number operator for the q = 1 regime: Delta_aa / f. Exact on the whole
// space: [N, A^dag] = A^dag follows from [Delta, A^dag] = f A^dag. The
// spectral route (inverting A^dag A through phi) is ill-posed because the
// quadratic structure function is not injective; this one is.
// Domain error when f vanishes (the undeformed-boson case is excluded).
Operator number_operator_q1(const FockSpace& space, const Eigen::MatrixXcd& phi);

// Number operator for a one-hot Phi in the q < 1 regime: the constituent
// number operator of the a-mode carrying the nonzero entry. Acts as n on
// (A^dag)^n|O> and satisfies [N, A^dag] = A^dag strongly. Contract error when
// Phi is not one-hot.
Operator number_operator_qlt1(const FockSpace& space, const Eigen::MatrixXcd& phi);

// Ladder states A^dag_{w_1} ... A^dag_{w_n} |O> for every multiset {w_i} of
// pair indices, n <= n_max. Words are ascending and applied rightmost-first;
// enumeration is lexicographic, so state order is reproducible.
struct LadderLevel {
    int n = 0;
    std::vector<std::vector<int>> words;   // multiset per state, 0-based pair indices
    std::vector<Eigen::VectorXcd> states;  // same order as words
    std::vector<double> norms;
    Eigen::MatrixXcd gram;
    Eigen::VectorXd gram_eigs;             // ascending
    std::vector<bool> null_directions;     // per eigenvalue, below rank_tol * largest
    int rank = 0;
};

struct LadderBasis {
    std::vector<LadderLevel> levels;  // levels[n] holds the n-quanta states
    double rank_tol = 1e-9;
};

// Pauli-blocked levels come out as null directions of the Gram matrix; that
// is a structural fact, not an error. The only hard failure is a q < 1 space
// whose cutoff cannot hold n_max quanta per mode without truncation leakage.
LadderBasis ladder_basis(const FockSpace& space, const std::vector<OperatorPair>& pairs,
                         int n_max, double rank_tol = 1e-9);

// Counting-map condition chi(phi(n), 1 - n f) = n for the candidate number
// maps. For the quadratic family: the implemented linear map (1-y)/f, the two
// structure-function inverses (first argument, and shifted sum x+y), and
// their p-blend. For the q-fermion square: the eigenvalue-pair labeling map,
// whose consecutive labels must differ by one.
ResidualSet check_chi_condition(const DsfSpec& spec, int n_max);

// |O> as a dense column
Eigen::VectorXcd vacuum_vector(const FockSpace& space);

} // namespace qb

#endif
