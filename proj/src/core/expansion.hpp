#ifndef QB_CORE_EXPANSION_HPP
#define QB_CORE_EXPANSION_HPP

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fock.hpp"
#include "report.hpp"

namespace qb {

// Integer coefficients P_n^{kl}(j) of the two-mode product expansion
//   (A^dag)^n = sum_{k,l} (-1)^{n(n-1)/2} C_n^{kl}
//               (a2^dag)^k (a1^dag)^{n-k} (b2^dag)^l (b1^dag)^{n-l} |O>,
//   C_n^{kl}  = sum_j P_n^{kl}(j) (P22)^j (P21)^{k-j} (P12)^{l-j} (P11)^{n-k-l+j}.
// Values are exact; they grow at most 4^(n-1) so int64 holds them to n = 30.
struct PTable {
    int n_max = 0;
    std::vector<long long> vals;  // dense (n,k,l,j) block, zero outside support

    // 0 whenever an index falls outside 0<=k,l<=n, max(0,k+l-n)<=j<=min(k,l)
    long long at(int n, int k, int l, int j) const;
};

PTable p_table(int n_max);

// Closed forms exist for the patterns (k,l) in {01,10,11,02,20,12,21,22} with
// the j values those formulas list; anything else is a range error. The
// formulas already vanish where the j-support is empty, matching the table.
long long p_closed_form(int n, int k, int l, int j);

// every in-support entry as "n,k,l,j,value" lines
std::string p_table_csv(int n_max);

// Evaluated expansion coefficients for a concrete 2x2 Phi.
struct CTable {
    int n_max = 0;
    std::vector<cd> vals;

    cd at(int n, int k, int l) const;  // 0 outside 0 <= k,l <= n
};

CTable c_table(const Eigen::MatrixXcd& phi, int n_max);

// Brute-force counterpart: apply (A^dag)^n to the vacuum of a 2+2 space and
// project onto the ordered occupancy monomials. Needs cutoff >= n_max, so
// q < 1. The coefficients themselves do not depend on q.
CTable c_table_oracle(const Eigen::MatrixXcd& phi, double q, int n_max);

// Closed-form expansion of A (A^dag)^n as a normally-reordered sum over
// constituent mode words, with q-powers tracking same-mode passes, compared
// against the direct matrix product on the interior subspace.
ResidualSet expand_annihilation_product(const FockSpace& space,
                                        const Eigen::MatrixXcd& phi, int n);

// Single-constituent-mode space: AA^dag on (A^dag)^n|O> must act as the
// squared bracket [n+1]^2.
ResidualSet check_example1(double q, int cutoff);

// Two-mode realizability system: the structure function a 2x2 Phi would need,
// from the closed form in the reference entry Phi(1,1) (which must be
// nonzero). Index 0..n_max.
std::vector<cd> example2_dsf(const Eigen::MatrixXcd& phi, double q, int n_max);

// Evaluates the full lowering condition A (A^dag)^{n+1}|O> = phi(n+1)(A^dag)^n|O>
// as the equivalent coefficient system, one equation per (n, k, l), with phi
// from example2_dsf. Residuals are grouped by equation class so a failure
// names the entry of Phi it forces to vanish.
ResidualSet check_example2(const Eigen::MatrixXcd& phi, double q, int n_max);

// The three coefficient sequences multiplying p1, p2, p3 in the parameterized
// structure function must be linearly independent for the parameters to be
// extractable; checks the Gram rank over n = 2..8.
ResidualSet check_sequence_independence(double q);

} // namespace qb

#endif
