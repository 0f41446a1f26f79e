#include "composite.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qerror.hpp"

namespace qb {

namespace {

void require_shape(const FockSpace& space, const Eigen::MatrixXcd& phi, const char* who) {
    if (phi.rows() != space.spec().d_a || phi.cols() != space.spec().d_b) {
        std::ostringstream os;
        os << who << ": Phi is " << phi.rows() << "x" << phi.cols()
           << " but the space has d_a=" << space.spec().d_a
           << ", d_b=" << space.spec().d_b;
        fail(ErrorKind::Contract, os.str());
    }
}

void require_undeformed(const FockSpace& space, const char* who) {
    if (space.spec().q != 1.0) {
        std::ostringstream os;
        os << who << ": normal-ordered form is only the commutator deviation for "
           << "q = 1 constituents (got q=" << space.spec().q
           << "); compute [A, A^dag] directly instead";
        fail(ErrorKind::Contract, os.str());
    }
}

// nondecreasing words of the given length over {0..alphabet-1}, lexicographic
std::vector<std::vector<int>> ascending_words(int alphabet, int length) {
    std::vector<std::vector<int>> out;
    if (length == 0) {
        out.push_back({});
        return out;
    }
    std::vector<int> w(length, 0);
    for (;;) {
        out.push_back(w);
        int i = length - 1;
        while (i >= 0 && w[i] == alphabet - 1) --i;
        if (i < 0) break;
        int v = w[i] + 1;
        for (int j = i; j < length; ++j) w[j] = v;
    }
    return out;
}

// roots of phi(x) = value for the quadratic family phi(x) = x - x(x-1)/m,
// i.e. x^2 - (m+1)x + m*value = 0
std::pair<double, double> quadratic_roots(int m, double value) {
    const double s = m + 1.0;
    const double disc = std::max(0.0, s * s - 4.0 * m * value);
    const double r = std::sqrt(disc);
    return {0.5 * (s - r), 0.5 * (s + r)};
}

double nearest_root(int m, double value, double hint) {
    auto [lo, hi] = quadratic_roots(m, value);
    return std::abs(lo - hint) <= std::abs(hi - hint) ? lo : hi;
}

} // namespace

Eigen::VectorXcd vacuum_vector(const FockSpace& space) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
    v[space.vacuum()] = cd(1.0, 0.0);
    return v;
}

OperatorPair build_quasiboson(const FockSpace& space, const Eigen::MatrixXcd& phi,
                              int alpha) {
    require_shape(space, phi, "build_quasiboson");
    SpMat sum(space.dim(), space.dim());
    for (int mu = 0; mu < phi.rows(); ++mu) {
        for (int nu = 0; nu < phi.cols(); ++nu) {
            const cd c = phi(mu, nu);
            if (c == cd(0.0, 0.0)) continue;
            const SpMat term = creation_operator(space, space.a_mode(mu)).mat
                             * creation_operator(space, space.b_mode(nu)).mat;
            sum += c * term;
        }
    }
    OperatorPair pair;
    pair.alpha = alpha;
    pair.raise = Operator{space.id(), "Adag", sum};
    pair.lower = pair.raise.adjoint();
    pair.lower.tag = "A";
    return pair;
}

Operator delta_operator(const FockSpace& space, const Eigen::MatrixXcd& phi_a,
                        const Eigen::MatrixXcd& phi_b) {
    require_shape(space, phi_a, "delta_operator");
    require_shape(space, phi_b, "delta_operator");
    require_undeformed(space, "delta_operator");

    const int d_a = space.spec().d_a;
    const int d_b = space.spec().d_b;

    // coefficient of a^dag_mu' a_mu is (Phi_b Phi_a^H)(mu', mu);
    // coefficient of b^dag_nu' b_nu  is (Phi_a^H Phi_b)(nu, nu')
    const Eigen::MatrixXcd ca = phi_b * phi_a.adjoint();
    const Eigen::MatrixXcd cb = phi_a.adjoint() * phi_b;

    std::vector<SpMat> cre(space.n_modes()), ann(space.n_modes());
    for (int mode = 0; mode < space.n_modes(); ++mode) {
        cre[mode] = creation_operator(space, mode).mat;
        ann[mode] = annihilation_operator(space, mode).mat;
    }

    SpMat sum(space.dim(), space.dim());
    for (int mup = 0; mup < d_a; ++mup)
        for (int mu = 0; mu < d_a; ++mu) {
            const cd c = ca(mup, mu);
            if (c == cd(0.0, 0.0)) continue;
            sum += c * SpMat(cre[space.a_mode(mup)] * ann[space.a_mode(mu)]);
        }
    for (int nup = 0; nup < d_b; ++nup)
        for (int nu = 0; nu < d_b; ++nu) {
            const cd c = cb(nu, nup);
            if (c == cd(0.0, 0.0)) continue;
            sum += c * SpMat(cre[space.b_mode(nup)] * ann[space.b_mode(nu)]);
        }
    return Operator{space.id(), "Delta", sum};
}

Operator epsilon_operator(const FockSpace& space, const Eigen::MatrixXcd& phi) {
    Operator delta = delta_operator(space, phi, phi);
    Operator eps = op_sub(identity_operator(space), delta);
    eps.tag = "epsilon";
    return eps;
}

Operator number_operator_q1(const FockSpace& space, const Eigen::MatrixXcd& phi) {
    const double f = deformation_parameter(phi);
    if (f < 1e-14)
        fail(ErrorKind::Domain,
             "number_operator_q1: deformation parameter f = 0; the undeformed-boson "
             "case is excluded");
    Operator n = op_scale(cd(1.0 / f, 0.0), delta_operator(space, phi, phi));
    n.tag = "N";
    return n;
}

Operator number_operator_qlt1(const FockSpace& space, const Eigen::MatrixXcd& phi) {
    require_shape(space, phi, "number_operator_qlt1");
    int mu0 = -1, nu0 = -1;
    int nonzero = 0;
    for (int mu = 0; mu < phi.rows(); ++mu)
        for (int nu = 0; nu < phi.cols(); ++nu)
            if (std::abs(phi(mu, nu)) > 1e-12) {
                ++nonzero;
                mu0 = mu;
                nu0 = nu;
            }
    if (nonzero != 1)
        fail(ErrorKind::Contract,
             "number_operator_qlt1: Phi must be one-hot (exactly one nonzero entry), "
             "found " + std::to_string(nonzero));
    if (std::abs(std::abs(phi(mu0, nu0)) - 1.0) > 1e-9)
        fail(ErrorKind::Contract,
             "number_operator_qlt1: the one-hot entry must have unit modulus");
    (void)nu0;  // the a-side count equals the b-side count on every ladder state
    Operator n = number_operator_mode(space, space.a_mode(mu0));
    n.tag = "N";
    return n;
}

LadderBasis ladder_basis(const FockSpace& space, const std::vector<OperatorPair>& pairs,
                         int n_max, double rank_tol) {
    if (pairs.empty())
        fail(ErrorKind::Contract, "ladder_basis: no operator pairs given");
    for (const auto& p : pairs)
        if (p.raise.space_id != space.id())
            fail(ErrorKind::Contract, "ladder_basis: pair built on a different space");
    if (n_max < 0)
        fail(ErrorKind::Contract, "ladder_basis: n_max must be nonnegative");
    if (space.spec().q != 1.0 && n_max > space.spec().cutoff) {
        std::ostringstream os;
        os << "ladder_basis: n_max=" << n_max << " quanta per mode do not fit under "
           << "cutoff " << space.spec().cutoff << " without truncation leakage; "
           << "rebuild the space with cutoff >= " << n_max;
        fail(ErrorKind::Contract, os.str());
    }

    const int alphabet = static_cast<int>(pairs.size());
    LadderBasis basis;
    basis.rank_tol = rank_tol;
    basis.levels.resize(n_max + 1);

    for (int n = 0; n <= n_max; ++n) {
        LadderLevel& level = basis.levels[n];
        level.n = n;
        level.words = ascending_words(alphabet, n);

        if (n == 0) {
            level.states = {vacuum_vector(space)};
        } else {
            // each word's tail (all but the leading letter) is a word one
            // level down; apply the leading raise operator to that state
            std::map<std::vector<int>, int> prev_index;
            const LadderLevel& prev = basis.levels[n - 1];
            for (int i = 0; i < static_cast<int>(prev.words.size()); ++i)
                prev_index[prev.words[i]] = i;
            level.states.reserve(level.words.size());
            for (const auto& w : level.words) {
                std::vector<int> tail(w.begin() + 1, w.end());
                const Eigen::VectorXcd& base = prev.states[prev_index.at(tail)];
                level.states.push_back(pairs[w[0]].raise.mat * base);
            }
        }

        const int k = static_cast<int>(level.states.size());
        level.norms.resize(k);
        level.gram.resize(k, k);
        for (int i = 0; i < k; ++i) {
            level.norms[i] = level.states[i].norm();
            for (int j = 0; j < k; ++j)
                level.gram(i, j) = level.states[i].dot(level.states[j]);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(level.gram);
        level.gram_eigs = es.eigenvalues();
        const double lead = level.gram_eigs.size() ? level.gram_eigs.maxCoeff() : 0.0;
        level.null_directions.assign(k, true);
        level.rank = 0;
        if (lead > 0.0) {
            for (int i = 0; i < k; ++i) {
                const bool null_dir = level.gram_eigs[i] <= rank_tol * lead;
                level.null_directions[i] = null_dir;
                if (!null_dir) ++level.rank;
            }
        }
    }
    return basis;
}

ResidualSet check_chi_condition(const DsfSpec& spec, int n_max) {
    if (n_max < 1) fail(ErrorKind::Contract, "check_chi_condition: n_max must be >= 1");
    ResidualSet set;
    set.name = "chi_condition";
    set.anchor = "counting map chi(phi(n), 1 - n f) = n";

    if (spec.variant == DsfVariant::FermionicQuadratic) {
        const int m = spec.m;
        const double f = 2.0 / m;

        // chi(x, y) = (1 - y)/f ignores x and reads n off the second argument.
        // f = 2/m and y = 1 - n f are exact rationals over m, so the map is
        // checked in integer arithmetic: 1 - y = 2n/m, and dividing by f
        // multiplies by m/2, so the numerator of chi - n over denominator 2m
        // must vanish. Binary rounding of 2/3, 2/5, ... stays out of the
        // verdict this way; the plain double evaluation is reported alongside
        double r_linear = 0.0;
        double r_rounded = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            const long long chi_num = 2LL * n * m;  // (1 - y)/f over 2m
            const long long defect = chi_num - 2LL * m * n;
            r_linear = std::max(
                r_linear, std::abs(static_cast<double>(defect)) / (2.0 * m));
            const double y = 1.0 - n * f;
            r_rounded = std::max(r_rounded, std::abs((1.0 - y) / f - n));
        }
        set.entries.push_back(ResidualEntry::checked(
            "linear counting map (1 - y)/f", r_linear, 0.0, n_max + 1));
        set.entries.push_back(ResidualEntry::checked(
            "linear counting map under double rounding", r_rounded, 1e-12,
            n_max + 1));

        // the inverse-based candidates are root-membership checks: the
        // quadratic phi is not injective, so "phi^{-1}" means "n is among the
        // preimages", with the branch chosen nearest to the true label
        double r_first = 0.0, r_sum = 0.0, r_blend = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            const double x = fermionic_dsf(m, n);
            const double y = 1.0 - n * f;
            auto [lo1, hi1] = quadratic_roots(m, x);
            r_first = std::max(r_first, std::min(std::abs(lo1 - n), std::abs(hi1 - n)));
            auto [lo2, hi2] = quadratic_roots(m, x + y);
            r_sum = std::max(r_sum,
                             std::min(std::abs(lo2 - 1.0 - n), std::abs(hi2 - 1.0 - n)));
            const double blend = 0.5 * nearest_root(m, x, n)
                               + 0.5 * (nearest_root(m, x + y, n + 1.0) - 1.0);
            r_blend = std::max(r_blend, std::abs(blend - n));
        }
        // at odd m the parabola vertex sits on an integer level, the
        // discriminant degenerates to a double root, and sqrt turns the
        // ~1e-15 rounding of phi into ~1e-8 in the recovered roots; the
        // tolerance must sit above sqrt(eps), not at eps
        set.entries.push_back(ResidualEntry::checked(
            "inverse of the first argument (root membership)", r_first, 1e-6, n_max + 1));
        set.entries.push_back(ResidualEntry::checked(
            "inverse of the shifted sum x + y (root membership)", r_sum, 1e-6, n_max + 1));
        set.entries.push_back(ResidualEntry::checked(
            "half-blend of the two inverses", r_blend, 1e-6, n_max + 1));
        return set;
    }

    if (spec.variant == DsfVariant::QFermionSquare
        || spec.variant == DsfVariant::Parameterized) {
        // the counting map is defined by labeling consecutive eigenvalue pairs
        // (phi(n), phi(n+1)); it is well defined only when the pairs are
        // distinct, and then consecutive labels differ by one construction
        std::vector<double> phi(n_max + 2);
        for (int n = 0; n <= n_max + 1; ++n) phi[n] = unified_dsf(spec, n);

        int collisions = 0;
        for (int n = 0; n <= n_max; ++n)
            for (int np = n + 1; np <= n_max; ++np)
                if (std::abs(phi[n] - phi[np]) <= 1e-12
                    && std::abs(phi[n + 1] - phi[np + 1]) <= 1e-12)
                    ++collisions;

        if (spec.q == 0.0) {
            // flat structure function: every pair beyond the first collides,
            // so the labeling map degenerates; report rather than judge
            set.entries.push_back(ResidualEntry::info(
                "eigenvalue-pair label collisions", collisions,
                "structure function is flat at q = 0; the pair labeling cannot "
                "separate levels"));
            return set;
        }

        set.entries.push_back(ResidualEntry::checked(
            "eigenvalue-pair label collisions", collisions, 0.5,
            (n_max + 1) * n_max / 2));

        // recover each level's label by pair lookup and difference neighbors
        double r_spacing = 0.0;
        bool ambiguous = false;
        auto label_of = [&](int n) {
            int found = -1;
            for (int c = 0; c <= n_max; ++c)
                if (std::abs(phi[c] - phi[n]) <= 1e-12
                    && std::abs(phi[c + 1] - phi[n + 1]) <= 1e-12) {
                    if (found >= 0) ambiguous = true;
                    found = c;
                }
            return found;
        };
        for (int n = 0; n + 1 <= n_max; ++n) {
            const int l0 = label_of(n), l1 = label_of(n + 1);
            r_spacing = std::max(r_spacing, std::abs(double(l1 - l0) - 1.0));
        }
        if (ambiguous) r_spacing = std::max(r_spacing, 1.0);
        set.entries.push_back(ResidualEntry::checked(
            "unit spacing of recovered labels", r_spacing, 1e-12, n_max));
        return set;
    }

    fail(ErrorKind::Config,
         "check_chi_condition: needs a structure-function family with an explicit "
         "f or q parameter (quadratic or q-fermion square)");
}

} // namespace qb
