#ifndef QB_CORE_PHI_HPP
#define QB_CORE_PHI_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "report.hpp"

namespace qb {

using cd = std::complex<double>;

// A family of composite-mode coefficient matrices Phi_alpha (d_a x d_b each),
// together with the deformation regime q they are meant for. Construction does
// not validate the algebraic constraints; the checkers below classify instead,
// so arbitrary external input can be ingested and diagnosed.
struct PhiFamily {
    int d_a = 0;
    int d_b = 0;
    double q = 1.0;
    std::vector<Eigen::MatrixXcd> mats;

    int modes() const { return static_cast<int>(mats.size()); }
};

// f = 2 tr((Phi^H Phi)^2). Real and nonnegative for any matrix.
double deformation_parameter(const Eigen::MatrixXcd& phi);
// common f across the family; `spread` (if given) receives max_ab |f_a - f_b|
double family_deformation_parameter(const PhiFamily& family, double* spread = nullptr);

// q = 1 constraint system: pairwise trace orthonormality, the cubic
// self-consistency Phi Phi^H Phi = (f/2) Phi, and the vanishing of the
// symmetrized cross products Phi_b Phi_a^H Phi_c + Phi_c Phi_a^H Phi_b (a != b).
ResidualSet check_constraint_system(const PhiFamily& family, double tol);

// q < 1 structure conditions: within each matrix no two nonzero entries may
// share a row, share a column, or sit at different rows and columns (together
// forcing a single entry of unit modulus); across matrices the entry positions
// must be disjoint in both indices and satisfy the two-index symmetry.
ResidualSet check_q_structure(const PhiFamily& family, double tol);

struct OneHotEntry {
    int mu = 0;  // 0-based row
    int nu = 0;  // 0-based column
    cd value;
};
// positions of the single nonzero per matrix, if the family has that shape
std::optional<std::vector<OneHotEntry>> one_hot_positions(const PhiFamily& family, double tol);

// Block solution of the q = 1 system: Phi_alpha = U1 D_alpha U2^H where
// D_alpha carries sqrt(1/m) U_alpha on the alpha-th m x m diagonal block.
// With a seed the three unitary ingredients are Haar-distributed but fully
// deterministic; without one they are identity matrices.
PhiFamily generate_family(int d_a, int d_b, int m, int n_modes,
                          std::optional<std::uint64_t> seed);
// with caller-supplied unitaries (checked for unitarity)
PhiFamily generate_family_with(int d_a, int d_b, int m,
                               const Eigen::MatrixXcd& u1, const Eigen::MatrixXcd& u2,
                               const std::vector<Eigen::MatrixXcd>& blocks);

// single-entry family e_{alpha alpha} scaled to unit modulus, for q < 1
PhiFamily one_hot_family(int d_a, int d_b, double q, int n_modes);

enum class PhiVerdict {
    RealizableFermionic,   // q = 1 branch constraints hold
    RealizableQFermionic,  // q < 1 structure conditions hold
    NotRealizable,
};

struct Classification {
    PhiVerdict verdict = PhiVerdict::NotRealizable;
    double f = 0.0;
    std::vector<std::string> reasons;  // empty on the realizable verdicts
    ResidualSet details;
};
Classification classify(const PhiFamily& family, double tol);

// JSON wire format:
// {"d_a": int, "d_b": int, "q": float,
//  "modes": [{"alpha": int, "entries": [{"mu": int, "nu": int, "re": f, "im": f}]}]}
// with alpha/mu/nu 1-based in the file.
std::string phi_to_json(const PhiFamily& family);
PhiFamily phi_from_json(const std::string& text);

// deterministic Haar-like unitary from a seeded generator
Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed);

} // namespace qb

#endif
