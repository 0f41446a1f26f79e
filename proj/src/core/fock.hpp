#ifndef QB_CORE_FOCK_HPP
#define QB_CORE_FOCK_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "report.hpp"

namespace qb {

using cd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cd>;

// Two families of deformed modes: d_a "a" modes and d_b "b" modes, every mode
// truncated at occupation `cutoff`. q = 1 collapses each mode to a two-level
// system, so building with q = 1 forces cutoff = 1.
struct ModeSpec {
    int d_a = 1;
    int d_b = 1;
    double q = 1.0;
    int cutoff = 1;
};

class FockSpace {
public:
    // dim = (cutoff+1)^(d_a+d_b) must stay within dim_cap.
    static FockSpace build(const ModeSpec& spec, std::int64_t dim_cap = 1'000'000);

    const ModeSpec& spec() const { return spec_; }
    int dim() const { return dim_; }
    int n_modes() const { return spec_.d_a + spec_.d_b; }
    int local_dim() const { return spec_.cutoff + 1; }
    std::uint64_t id() const { return id_; }
    int vacuum() const { return 0; }

    // canonical chain order: a_1 .. a_da, b_1 .. b_db (0-based indices here)
    int a_mode(int mu) const;  // mu in [0, d_a)
    int b_mode(int nu) const;  // nu in [0, d_b)

    int occupancy(int state, int mode) const;
    std::vector<int> occupancies(int state) const;
    int state_index(const std::vector<int>& occ) const;

private:
    ModeSpec spec_;
    int dim_ = 0;
    std::uint64_t id_ = 0;
    std::vector<int> stride_;  // per mode, first mode most significant

    friend SpMat creation_matrix(const FockSpace&, int);
    friend SpMat number_matrix(const FockSpace&, int);
    friend SpMat interior_projector_matrix(const FockSpace&, int);
};

// An operator bound to a specific space instance; arithmetic across spaces is
// a contract violation.
struct Operator {
    std::uint64_t space_id = 0;
    std::string tag;
    SpMat mat;

    Operator adjoint() const;
};

Operator creation_operator(const FockSpace& space, int mode);
Operator annihilation_operator(const FockSpace& space, int mode);
Operator number_operator_mode(const FockSpace& space, int mode);
Operator identity_operator(const FockSpace& space);
// diagonal projector onto states whose every occupancy is <= cutoff - margin
Operator interior_projector(const FockSpace& space, int margin);

void require_same_space(const Operator& x, const Operator& y);
Operator op_mul(const Operator& x, const Operator& y);
Operator op_add(const Operator& x, const Operator& y);
Operator op_sub(const Operator& x, const Operator& y);
Operator op_scale(const cd& c, const Operator& x);
Operator commutator(const Operator& x, const Operator& y);
Operator anticommutator(const Operator& x, const Operator& y);

double frobenius_norm(const SpMat& m);
double max_abs(const SpMat& m);
// largest singular value; deterministic power iteration with a dense fallback
double spectral_norm(const SpMat& m);

// Graded commutation checks for the constituent modes, evaluated after
// projecting onto the interior (margin 1) so truncation defects at the top
// occupation level are excluded. Entries aggregate the worst pair per class.
ResidualSet verify_mode_relations(const FockSpace& space, double tol);

// Spectral norm of (x_mu xdag_mu + q xdag_mu x_mu - 1) on the full space for
// one mode; nonzero exactly when the cutoff clips the ladder (q < 1).
double mode_relation_full_space_defect(const FockSpace& space, int mode);

struct NilpotencyResult {
    bool is_zero = false;            // (creation)^k == 0 as a matrix
    bool truncation_artifact = false;  // zero only because k exceeds the cutoff
    double max_abs_entry = 0.0;
};
NilpotencyResult check_nilpotency(const FockSpace& space, int mode, int k);

} // namespace qb

#endif
