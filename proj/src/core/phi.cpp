#include "phi.hpp"

#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "qerror.hpp"

namespace qb {

namespace {

using ordered_json = nlohmann::ordered_json;

void require_nonempty(const PhiFamily& family) {
    if (family.modes() == 0) fail(ErrorKind::Contract, "family has no coefficient matrices");
    for (const auto& m : family.mats)
        if (m.rows() != family.d_a || m.cols() != family.d_b)
            fail(ErrorKind::Contract, "coefficient matrix does not match the declared mode counts");
}

double gauss(std::mt19937_64& rng) {
    // Box-Muller on explicitly constructed uniforms; std::normal_distribution
    // is implementation-defined and would break report determinism
    constexpr double two_pi = 6.283185307179586476925286766559;
    double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

} // namespace

Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXcd z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double re = gauss(rng);
            double im = gauss(rng);
            z(i, j) = cd(re, im);
        }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        cd d = r(j, j);
        cd phase = (std::abs(d) == 0.0) ? cd(1.0, 0.0) : d / std::abs(d);
        q.col(j) *= phase;
    }
    return q;
}

double deformation_parameter(const Eigen::MatrixXcd& phi) {
    Eigen::MatrixXcd g = phi.adjoint() * phi;
    return 2.0 * (g * g).trace().real();
}

double family_deformation_parameter(const PhiFamily& family, double* spread) {
    require_nonempty(family);
    double lo = 0.0, hi = 0.0, sum = 0.0;
    for (int a = 0; a < family.modes(); ++a) {
        double f = deformation_parameter(family.mats[static_cast<std::size_t>(a)]);
        if (a == 0) lo = hi = f;
        lo = std::min(lo, f);
        hi = std::max(hi, f);
        sum += f;
    }
    if (spread) *spread = hi - lo;
    return sum / family.modes();
}

ResidualSet check_constraint_system(const PhiFamily& family, double tol) {
    require_nonempty(family);
    const int N = family.modes();

    double ortho = 0.0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            cd tr = (family.mats[static_cast<std::size_t>(a)] *
                     family.mats[static_cast<std::size_t>(b)].adjoint())
                        .trace();
            double target = (a == b) ? 1.0 : 0.0;
            ortho = std::max(ortho, std::abs(tr - cd(target, 0.0)));
        }

    double cubic = 0.0;
    for (int a = 0; a < N; ++a) {
        const auto& p = family.mats[static_cast<std::size_t>(a)];
        double half_f = deformation_parameter(p) / 2.0;
        cubic = std::max(cubic, (p * p.adjoint() * p - half_f * p).norm());
    }

    double cross = 0.0;
    int cross_probes = 0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            if (a == b) continue;
            for (int c = 0; c < N; ++c) {
                const auto& pa = family.mats[static_cast<std::size_t>(a)];
                const auto& pb = family.mats[static_cast<std::size_t>(b)];
                const auto& pc = family.mats[static_cast<std::size_t>(c)];
                cross = std::max(cross, (pb * pa.adjoint() * pc + pc * pa.adjoint() * pb).norm());
                ++cross_probes;
            }
        }

    double spread = 0.0;
    family_deformation_parameter(family, &spread);

    ResidualSet set;
    set.name = "coefficient_constraints";
    set.anchor = "tr(Phi_a Phi_b^H) = delta_ab; Phi Phi^H Phi = (f/2) Phi; symmetrized cross products vanish";
    set.entries.push_back(ResidualEntry::checked("pair trace orthonormality", ortho, tol, N * N));
    set.entries.push_back(ResidualEntry::checked("cubic self-consistency", cubic, tol, N));
    set.entries.push_back(ResidualEntry::checked("symmetrized cross products", cross, tol, cross_probes));
    set.entries.push_back(ResidualEntry::checked("deformation parameter spread", spread, tol, N));
    return set;
}

ResidualSet check_q_structure(const PhiFamily& family, double tol) {
    require_nonempty(family);
    const int N = family.modes();
    const int R = family.d_a, C = family.d_b;

    double row_pair = 0.0, col_pair = 0.0, skew_pair = 0.0;
    for (int a = 0; a < N; ++a) {
        const auto& p = family.mats[static_cast<std::size_t>(a)];
        for (int r1 = 0; r1 < R; ++r1)
            for (int c1 = 0; c1 < C; ++c1) {
                double m1 = std::abs(p(r1, c1));
                if (m1 == 0.0) continue;
                for (int r2 = 0; r2 < R; ++r2)
                    for (int c2 = 0; c2 < C; ++c2) {
                        if (r1 == r2 && c1 == c2) continue;
                        double prod = m1 * std::abs(p(r2, c2));
                        if (r1 == r2) row_pair = std::max(row_pair, prod);
                        else if (c1 == c2) col_pair = std::max(col_pair, prod);
                        else skew_pair = std::max(skew_pair, prod);
                    }
            }
    }

    // cross-mode: two-index symmetry and disjoint support in both indices
    double symmetry = 0.0, overlap = 0.0;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            if (a == b) continue;
            const auto& pa = family.mats[static_cast<std::size_t>(a)];
            const auto& pb = family.mats[static_cast<std::size_t>(b)];
            for (int r = 0; r < R; ++r)
                for (int c1 = 0; c1 < C; ++c1)
                    for (int c2 = 0; c2 < C; ++c2) {
                        if (c1 == c2) continue;
                        symmetry = std::max(symmetry, std::abs(pa(r, c1) * pb(r, c2) - pa(r, c2) * pb(r, c1)));
                    }
            for (int c = 0; c < C; ++c)
                for (int r1 = 0; r1 < R; ++r1)
                    for (int r2 = 0; r2 < R; ++r2) {
                        if (r1 == r2) continue;
                        symmetry = std::max(symmetry, std::abs(pa(r1, c) * pb(r2, c) - pa(r2, c) * pb(r1, c)));
                    }
            if (a < b) {
                for (int r = 0; r < R; ++r) {
                    double ma = pa.row(r).cwiseAbs().maxCoeff();
                    double mb = pb.row(r).cwiseAbs().maxCoeff();
                    overlap = std::max(overlap, ma * mb);
                }
                for (int c = 0; c < C; ++c) {
                    double ma = pa.col(c).cwiseAbs().maxCoeff();
                    double mb = pb.col(c).cwiseAbs().maxCoeff();
                    overlap = std::max(overlap, ma * mb);
                }
            }
        }

    // given single-entry structure, the entry must have unit modulus
    double unit = 0.0;
    for (int a = 0; a < N; ++a) {
        double big = family.mats[static_cast<std::size_t>(a)].cwiseAbs().maxCoeff();
        unit = std::max(unit, std::fabs(big - 1.0));
    }

    ResidualSet set;
    set.name = "q_structure";
    set.anchor = "single unit-modulus entry per matrix, pairwise disjoint rows and columns";
    set.entries.push_back(ResidualEntry::checked("same-row pair products", row_pair, tol, N));
    set.entries.push_back(ResidualEntry::checked("same-column pair products", col_pair, tol, N));
    set.entries.push_back(ResidualEntry::checked("skew pair products", skew_pair, tol, N));
    set.entries.push_back(ResidualEntry::checked("cross-mode two-index symmetry", symmetry, tol, N * (N - 1)));
    set.entries.push_back(ResidualEntry::checked("cross-mode support overlap", overlap, tol, N * (N - 1) / 2));
    set.entries.push_back(ResidualEntry::checked("entry modulus deviation from 1", unit, tol, N));
    return set;
}

std::optional<std::vector<OneHotEntry>> one_hot_positions(const PhiFamily& family, double tol) {
    require_nonempty(family);
    std::vector<OneHotEntry> out;
    for (const auto& p : family.mats) {
        int count = 0;
        OneHotEntry e;
        for (int r = 0; r < p.rows(); ++r)
            for (int c = 0; c < p.cols(); ++c)
                if (std::abs(p(r, c)) > tol) {
                    ++count;
                    e.mu = r;
                    e.nu = c;
                    e.value = p(r, c);
                }
        if (count != 1) return std::nullopt;
        out.push_back(e);
    }
    return out;
}

PhiFamily generate_family_with(int d_a, int d_b, int m,
                               const Eigen::MatrixXcd& u1, const Eigen::MatrixXcd& u2,
                               const std::vector<Eigen::MatrixXcd>& blocks) {
    if (m < 1) fail(ErrorKind::Domain, "block size m must be >= 1");
    int n_modes = static_cast<int>(blocks.size());
    if (n_modes < 1) fail(ErrorKind::Domain, "need at least one composite mode");
    if (static_cast<std::int64_t>(n_modes) * m > std::min(d_a, d_b))
        fail(ErrorKind::Capacity, "empty solution set: modes * m exceeds min(d_a, d_b)");

    auto require_unitary = [](const Eigen::MatrixXcd& u, const char* what) {
        Eigen::MatrixXcd g = u.adjoint() * u;
        g -= Eigen::MatrixXcd::Identity(u.rows(), u.cols());
        if (g.norm() > 1e-10) fail(ErrorKind::Contract, std::string(what) + " is not unitary");
    };
    if (u1.rows() != d_a || u1.cols() != d_a) fail(ErrorKind::Contract, "left transition matrix has wrong shape");
    if (u2.rows() != d_b || u2.cols() != d_b) fail(ErrorKind::Contract, "right transition matrix has wrong shape");
    require_unitary(u1, "left transition matrix");
    require_unitary(u2, "right transition matrix");

    double scale = std::sqrt(1.0 / m);  // sqrt(f/2) with f = 2/m
    PhiFamily family;
    family.d_a = d_a;
    family.d_b = d_b;
    family.q = 1.0;
    for (int a = 0; a < n_modes; ++a) {
        const auto& blk = blocks[static_cast<std::size_t>(a)];
        if (blk.rows() != m || blk.cols() != m) fail(ErrorKind::Contract, "block has wrong shape");
        require_unitary(blk, "block");
        Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(d_a, d_b);
        d.block(a * m, a * m, m, m) = scale * blk;
        family.mats.push_back(u1 * d * u2.adjoint());
    }
    return family;
}

PhiFamily generate_family(int d_a, int d_b, int m, int n_modes,
                          std::optional<std::uint64_t> seed) {
    if (n_modes < 1) fail(ErrorKind::Domain, "need at least one composite mode");
    Eigen::MatrixXcd u1, u2;
    std::vector<Eigen::MatrixXcd> blocks;
    if (seed) {
        // distinct stream per ingredient, all pinned to the one seed
        u1 = haar_unitary(d_a, *seed * 6364136223846793005ULL + 1ULL);
        u2 = haar_unitary(d_b, *seed * 6364136223846793005ULL + 2ULL);
        for (int a = 0; a < n_modes; ++a)
            blocks.push_back(haar_unitary(m, *seed * 6364136223846793005ULL + 3ULL + static_cast<std::uint64_t>(a)));
    } else {
        u1 = Eigen::MatrixXcd::Identity(d_a, d_a);
        u2 = Eigen::MatrixXcd::Identity(d_b, d_b);
        for (int a = 0; a < n_modes; ++a) blocks.push_back(Eigen::MatrixXcd::Identity(m, m));
    }
    return generate_family_with(d_a, d_b, m, u1, u2, blocks);
}

PhiFamily one_hot_family(int d_a, int d_b, double q, int n_modes) {
    if (n_modes < 1 || n_modes > std::min(d_a, d_b))
        fail(ErrorKind::Capacity, "one-hot family needs n_modes <= min(d_a, d_b)");
    PhiFamily family;
    family.d_a = d_a;
    family.d_b = d_b;
    family.q = q;
    for (int a = 0; a < n_modes; ++a) {
        Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d_a, d_b);
        p(a, a) = cd(1.0, 0.0);
        family.mats.push_back(p);
    }
    return family;
}

Classification classify(const PhiFamily& family, double tol) {
    require_nonempty(family);
    Classification c;
    c.f = family_deformation_parameter(family, nullptr);

    if (c.f <= tol) {
        c.verdict = PhiVerdict::NotRealizable;
        c.reasons.push_back("deformation parameter f = 0: the undeformed-boson case is excluded");
        c.details = (family.q == 1.0) ? check_constraint_system(family, tol)
                                      : check_q_structure(family, tol);
        return c;
    }

    if (family.q == 1.0) {
        c.details = check_constraint_system(family, tol);
        if (c.details.all_pass()) {
            c.verdict = PhiVerdict::RealizableFermionic;
        } else {
            c.verdict = PhiVerdict::NotRealizable;
            for (const auto& e : c.details.entries)
                if (!e.pass) c.reasons.push_back("q = 1 constraint violated: " + e.label);
        }
    } else {
        c.details = check_q_structure(family, tol);
        if (c.details.all_pass()) {
            c.verdict = PhiVerdict::RealizableQFermionic;
        } else {
            c.verdict = PhiVerdict::NotRealizable;
            for (const auto& e : c.details.entries)
                if (!e.pass) c.reasons.push_back("q < 1 structure violated: " + e.label);
        }
    }
    return c;
}

std::string phi_to_json(const PhiFamily& family) {
    require_nonempty(family);
    ordered_json j;
    j["d_a"] = family.d_a;
    j["d_b"] = family.d_b;
    j["q"] = family.q;
    j["modes"] = ordered_json::array();
    for (int a = 0; a < family.modes(); ++a) {
        ordered_json mode;
        mode["alpha"] = a + 1;
        mode["entries"] = ordered_json::array();
        const auto& p = family.mats[static_cast<std::size_t>(a)];
        for (int r = 0; r < p.rows(); ++r)
            for (int c2 = 0; c2 < p.cols(); ++c2) {
                cd v = p(r, c2);
                if (v == cd(0.0, 0.0)) continue;
                ordered_json e;
                e["mu"] = r + 1;
                e["nu"] = c2 + 1;
                e["re"] = v.real();
                e["im"] = v.imag();
                mode["entries"].push_back(e);
            }
        j["modes"].push_back(mode);
    }
    return j.dump(2) + "\n";
}

PhiFamily phi_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& ex) {
        fail(ErrorKind::Config, std::string("coefficient file is not valid JSON: ") + ex.what());
    }
    try {
        PhiFamily family;
        family.d_a = j.at("d_a").get<int>();
        family.d_b = j.at("d_b").get<int>();
        family.q = j.at("q").get<double>();
        if (family.d_a < 1 || family.d_b < 1)
            fail(ErrorKind::Config, "d_a and d_b must be positive");
        if (!(family.q > -1.0 && family.q <= 1.0))
            fail(ErrorKind::Config, "q must lie in (-1, 1]");
        const auto& modes = j.at("modes");
        if (!modes.is_array() || modes.empty())
            fail(ErrorKind::Config, "coefficient file lists no modes");
        family.mats.resize(modes.size());
        std::vector<bool> seen(modes.size(), false);
        for (const auto& mode : modes) {
            int alpha = mode.at("alpha").get<int>();
            if (alpha < 1 || alpha > static_cast<int>(modes.size()))
                fail(ErrorKind::Config, "mode index alpha out of range");
            if (seen[static_cast<std::size_t>(alpha - 1)])
                fail(ErrorKind::Config, "duplicate mode index alpha");
            seen[static_cast<std::size_t>(alpha - 1)] = true;
            Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(family.d_a, family.d_b);
            for (const auto& e : mode.at("entries")) {
                int mu = e.at("mu").get<int>();
                int nu = e.at("nu").get<int>();
                if (mu < 1 || mu > family.d_a || nu < 1 || nu > family.d_b)
                    fail(ErrorKind::Config, "entry index out of range");
                p(mu - 1, nu - 1) = cd(e.at("re").get<double>(), e.at("im").get<double>());
            }
            family.mats[static_cast<std::size_t>(alpha - 1)] = std::move(p);
        }
        return family;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& ex) {
        fail(ErrorKind::Config, std::string("coefficient file has unexpected shape: ") + ex.what());
    }
}

} // namespace qb
