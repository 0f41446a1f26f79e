#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "expansion.hpp"
#include "qerror.hpp"

namespace qb {

using ordered_json = nlohmann::ordered_json;

namespace {

int thread_count() {
    const char* env = std::getenv("QB_THREADS");
    if (!env) return 1;
    const int t = std::atoi(env);
    return std::clamp(t, 1, 8);
}

// deterministic parallel map: results land in preassigned slots, reduction
// stays sequential
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    const int threads = std::min(thread_count(), std::max(1, count));
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = t; i < count; i += threads) fn(i);
        });
    for (auto& th : pool) th.join();
}

SpMat sparse_power(const SpMat& m, int e) {
    SpMat r(m.rows(), m.cols());
    r.setIdentity();
    for (int i = 0; i < e; ++i) r = (r * m).pruned();
    return r;
}

double snorm(const SpMat& m) { return spectral_norm(m); }

std::string mode_suffix(int alpha, int modes) {
    return modes > 1 ? " (mode " + std::to_string(alpha + 1) + ")" : "";
}

} // namespace

ResidualSet weak_equality_suite(const FockSpace& space, const PhiFamily& family,
                                const DsfSpec& spec, int n_max, double tol) {
    if (family.modes() == 0)
        fail(ErrorKind::Contract, "weak_equality_suite: empty family");

    std::vector<OperatorPair> pairs;
    pairs.reserve(family.modes());
    for (int a = 0; a < family.modes(); ++a)
        pairs.push_back(build_quasiboson(space, family.mats[a], a));
    const LadderBasis basis = ladder_basis(space, pairs, n_max);

    std::vector<double> phi(n_max + 2);
    for (int n = 0; n <= n_max + 1; ++n) phi[n] = unified_dsf(spec, n);

    // number operators: Delta/f at q = 1, the constituent count at a one-hot
    // position otherwise; families outside both shapes get no number check
    std::vector<Operator> numops;
    bool have_numops = false;
    if (space.spec().q == 1.0) {
        for (int a = 0; a < family.modes(); ++a)
            numops.push_back(number_operator_q1(space, family.mats[a]));
        have_numops = true;
    } else if (one_hot_positions(family, 1e-9)) {
        for (int a = 0; a < family.modes(); ++a)
            numops.push_back(number_operator_qlt1(space, family.mats[a]));
        have_numops = true;
    }

    struct Task {
        int n = 0;
        int idx = 0;
    };
    std::vector<Task> tasks;
    for (const auto& level : basis.levels)
        for (int i = 0; i < static_cast<int>(level.states.size()); ++i)
            tasks.push_back({level.n, i});

    struct Cell {
        double r_lower_raise = 0.0, r_raise_lower = 0.0, r_cross = 0.0, r_num = 0.0;
        double norm_dev = 0.0;
        bool is_null = false, null_matches = true, raise_skipped = false;
    };
    std::vector<Cell> cells(tasks.size());

    const int modes = family.modes();
    const int cutoff = space.spec().cutoff;
    const bool deformed = space.spec().q != 1.0;

    parallel_for(static_cast<int>(tasks.size()), [&](int ti) {
        const Task& t = tasks[ti];
        const LadderLevel& level = basis.levels[t.n];
        const Eigen::VectorXcd& v = level.states[t.idx];
        Cell& cell = cells[ti];

        std::vector<int> mult(modes, 0);
        for (int w : level.words[t.idx]) ++mult[w];
        double pred = 1.0;
        for (int a = 0; a < modes; ++a)
            for (int k = 1; k <= mult[a]; ++k) pred *= phi[k];

        const double nrm = v.norm();
        cell.is_null = nrm <= 1e-10;
        const bool pred_null = std::abs(pred) <= 1e-12;
        cell.null_matches = (cell.is_null == pred_null);
        if (cell.is_null) return;

        cell.norm_dev = std::abs(nrm * nrm - pred) / std::max(1.0, std::abs(pred));
        const bool can_raise = !deformed || t.n + 1 <= cutoff;
        cell.raise_skipped = !can_raise;

        for (int a = 0; a < modes; ++a) {
            const SpMat& R = pairs[a].raise.mat;
            const SpMat& L = pairs[a].lower.mat;
            const Eigen::VectorXcd lv = L * v;
            cell.r_lower_raise = std::max(
                cell.r_lower_raise, (R * lv - phi[mult[a]] * v).norm() / nrm);
            if (can_raise) {
                const Eigen::VectorXcd rv = R * v;
                cell.r_raise_lower = std::max(
                    cell.r_raise_lower, (L * rv - phi[mult[a] + 1] * v).norm() / nrm);
                if (have_numops) {
                    const SpMat& N = numops[a].mat;
                    cell.r_num = std::max(
                        cell.r_num, (N * rv - R * (N * v) - rv).norm() / nrm);
                }
                for (int b = 0; b < modes; ++b) {
                    if (b == a) continue;
                    const SpMat& Rb = pairs[b].raise.mat;
                    cell.r_cross = std::max(
                        cell.r_cross, (L * (Rb * v) - Rb * lv).norm() / nrm);
                }
            }
        }
    });

    double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0, r_norm = 0.0;
    int live = 0, nulls = 0, mismatches = 0, skipped = 0;
    for (const Cell& c : cells) {
        if (!c.null_matches) ++mismatches;
        if (c.is_null) {
            ++nulls;
            continue;
        }
        ++live;
        if (c.raise_skipped) ++skipped;
        r1 = std::max(r1, c.r_lower_raise);
        r2 = std::max(r2, c.r_raise_lower);
        r3 = std::max(r3, c.r_cross);
        r4 = std::max(r4, c.r_num);
        r_norm = std::max(r_norm, c.norm_dev);
    }

    ResidualSet set;
    set.name = "weak_equalities";
    set.anchor = "deformed-oscillator defining relations on all ladder states";
    set.entries.push_back(ResidualEntry::checked(
        "raising-lowering eigenvalue on ladder states", r1, tol, live * modes));
    set.entries.push_back(ResidualEntry::checked(
        "lowering-raising eigenvalue on ladder states", r2, tol,
        (live - skipped) * modes,
        skipped ? "levels without cutoff headroom skipped" : ""));
    if (modes > 1)
        set.entries.push_back(ResidualEntry::checked(
            "cross-mode commutators on ladder states", r3, tol,
            (live - skipped) * modes * (modes - 1)));
    else
        set.entries.push_back(ResidualEntry::info(
            "cross-mode commutators on ladder states", 0.0, "single-mode family"));
    if (have_numops)
        set.entries.push_back(ResidualEntry::checked(
            "number-operator shift on ladder states", r4, tol,
            (live - skipped) * modes));
    else
        set.entries.push_back(ResidualEntry::info(
            "number-operator shift on ladder states", 0.0,
            "family fits no number-operator construction (not one-hot)"));
    set.entries.push_back(ResidualEntry::checked(
        "state norms against structure-function products", r_norm, tol, live));
    set.entries.push_back(ResidualEntry::checked(
        "null levels match structure-function zeros", mismatches, 0.5,
        static_cast<int>(cells.size()),
        std::to_string(nulls) + " null state(s) found"));
    return set;
}

BruteForceResult brute_force_phi(const FockSpace& space, const OperatorPair& pair,
                                 int n_max, double null_tol) {
    if (pair.raise.space_id != space.id())
        fail(ErrorKind::Contract, "brute_force_phi: pair built on a different space");
    if (space.spec().q != 1.0 && n_max > space.spec().cutoff)
        fail(ErrorKind::Contract,
             "brute_force_phi: n_max exceeds the cutoff headroom of a q < 1 space");

    BruteForceResult out;
    Eigen::VectorXcd prev = vacuum_vector(space);
    for (int n = 1; n <= n_max; ++n) {
        const Eigen::VectorXcd w = pair.raise.mat * prev;
        const double pn = prev.norm();
        if (w.norm() <= null_tol * std::max(1.0, pn)) {
            out.exhausted_at = n;
            break;
        }
        const double value = w.squaredNorm() / (pn * pn);
        out.values.push_back(value);
        out.defects.push_back((pair.lower.mat * w - value * prev).norm() / pn);
        prev = w;
    }
    return out;
}

ResidualSet commutator_cascade_suite(const FockSpace& space, const Eigen::MatrixXcd& phi,
                                     const DsfSpec& spec, int n_max, double tol) {
    if (space.spec().q != 1.0)
        fail(ErrorKind::Contract,
             "commutator_cascade_suite: the cascade identities assume q = 1");
    if (n_max < 1)
        fail(ErrorKind::Contract, "commutator_cascade_suite: n_max must be >= 1");

    const OperatorPair pair = build_quasiboson(space, phi);
    const SpMat& R = pair.raise.mat;
    const SpMat& L = pair.lower.mat;
    const SpMat D = delta_operator(space, phi, phi).mat;

    const Eigen::MatrixXcd psi = phi * phi.adjoint() * phi;
    const OperatorPair cubic = build_quasiboson(space, psi);
    const double f = deformation_parameter(phi);

    std::vector<double> ph(n_max + 2);
    for (int n = 0; n <= n_max + 1; ++n) ph[n] = unified_dsf(spec, n);

    ResidualSet set;
    set.name = "commutator_cascades";
    set.anchor = "commutators of Delta and the balance operator with the raising pair";

    set.entries.push_back(ResidualEntry::checked(
        "raising commutator of Delta resolves to the cubic family",
        snorm(SpMat(D * R - R * D - 2.0 * cubic.raise.mat)), tol));

    const SpMat ntA = (R * L).pruned();
    const SpMat comm_prod = (ntA * D - D * ntA).pruned();
    set.entries.push_back(ResidualEntry::checked(
        "product commutator splits into cubic cross terms",
        snorm(SpMat(comm_prod - 2.0 * SpMat(R * cubic.lower.mat)
                    + 2.0 * SpMat(cubic.raise.mat * L))),
        tol));

    const double align = (psi - 0.5 * f * phi).norm();
    set.entries.push_back(ResidualEntry::info(
        "cubic alignment defect of the family matrix", align));
    if (align < 1e-12)
        set.entries.push_back(ResidualEntry::checked(
            "product operator commutes with Delta (aligned family)", snorm(comm_prod),
            tol));
    else
        set.entries.push_back(ResidualEntry::info(
            "product operator commutes with Delta (aligned family)", snorm(comm_prod),
            "family is not cubic-aligned; the commutator need not vanish"));

    // ladder states and the balance operator F = Delta - 1 + phi(N+1) - phi(N),
    // whose scalar part is well defined level by level
    std::vector<Eigen::VectorXcd> w(n_max + 1), fw(n_max + 1);
    w[0] = vacuum_vector(space);
    for (int n = 1; n <= n_max; ++n) w[n] = R * w[n - 1];
    for (int n = 0; n <= n_max; ++n)
        fw[n] = (D * w[n] - w[n] + (ph[n + 1] - ph[n]) * w[n]).eval();

    double r_balance = 0.0;
    for (int n = 0; n <= n_max; ++n)
        r_balance = std::max(r_balance, fw[n].norm() / std::max(1.0, w[n].norm()));
    set.entries.push_back(ResidualEntry::checked(
        "balance operator annihilates ladder states", r_balance, tol, n_max + 1));

    const Eigen::VectorXcd first = fw[1] - R * fw[0]
                                 - 2.0 * (cubic.raise.mat * w[0])
                                 - (ph[2] - 2.0 * ph[1] + ph[0]) * w[1];
    set.entries.push_back(ResidualEntry::checked(
        "first-order ladder commutator on the vacuum",
        first.norm() / std::max(1.0, w[1].norm()), tol));

    for (int n = 1; n <= n_max; ++n) {
        Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(space.dim());
        for (int k = 0; k <= n; ++k) {
            const double sgn = ((n - k) % 2 == 0) ? 1.0 : -1.0;
            acc += sgn * static_cast<double>(binomial(n, k))
                 * (sparse_power(R, n - k) * fw[k]);
        }
        set.entries.push_back(ResidualEntry::checked(
            "ladder cascade annihilates the vacuum (n=" + std::to_string(n) + ")",
            acc.norm() / std::max(1.0, w[n].norm()), tol));
    }
    return set;
}

ResidualSet propositions_suite(const FockSpace& space, const Eigen::MatrixXcd& phi,
                               int n_max, double tol) {
    if (space.spec().q != 1.0)
        fail(ErrorKind::Contract, "propositions_suite: the identities assume q = 1");
    const int depth = std::clamp(n_max, 1, 4);

    const OperatorPair pair = build_quasiboson(space, phi);
    const SpMat& R = pair.raise.mat;
    const SpMat& L = pair.lower.mat;
    const SpMat D = delta_operator(space, phi, phi).mat;
    const SpMat E = epsilon_operator(space, phi).mat;
    const SpMat N = number_operator_q1(space, phi).mat;
    const double f = deformation_parameter(phi);

    ResidualSet set;
    set.name = "operator_identities";
    set.anchor = "Delta/epsilon/number commutation laws and their iterated closures";

    set.entries.push_back(ResidualEntry::checked(
        "raising shift of Delta", snorm(SpMat(D * R - R * D - f * R)), tol));
    set.entries.push_back(ResidualEntry::checked(
        "lowering shift of Delta", snorm(SpMat(D * L - L * D + f * L)), tol));
    set.entries.push_back(ResidualEntry::checked(
        "raising shift of epsilon", snorm(SpMat(E * R - R * E + f * R)), tol));
    set.entries.push_back(ResidualEntry::checked(
        "hermiticity of Delta", snorm(SpMat(D - SpMat(D.adjoint()))), tol));
    set.entries.push_back(ResidualEntry::checked(
        "Delta commutes with the number operator", snorm(SpMat(D * N - N * D)), tol));
    set.entries.push_back(ResidualEntry::checked(
        "number-operator raising shift", snorm(SpMat(N * R - R * N - R)), tol));

    const SpMat X = (R * L).pruned();
    for (int n = 0; n <= depth; ++n) {
        const SpMat xn = sparse_power(X, n);
        const SpMat xe = sparse_power(SpMat(X + E), n);
        set.entries.push_back(ResidualEntry::checked(
            "power commutator of the product operator (n=" + std::to_string(n) + ")",
            snorm(SpMat(xn * R - R * xn - SpMat(R * SpMat(xe - xn)))), tol));
        SpMat id(space.dim(), space.dim());
        id.setIdentity();
        const SpMat en = sparse_power(E, n);
        const SpMat ef = sparse_power(SpMat(E - f * id), n);
        set.entries.push_back(ResidualEntry::checked(
            "power commutator of epsilon (n=" + std::to_string(n) + ")",
            snorm(SpMat(en * R - R * en - SpMat(R * SpMat(ef - en)))), tol));
    }

    // iterated commutators L_0 = N, L_{k+1} = [L_k, A^dag] against the closed
    // form through the counting map, evaluated on the vacuum
    std::vector<SpMat> iter(depth + 1);
    iter[0] = N;
    for (int k = 1; k <= depth; ++k)
        iter[k] = (iter[k - 1] * R - R * iter[k - 1]).pruned();

    const Eigen::VectorXcd vac = vacuum_vector(space);
    std::vector<Eigen::VectorXcd> w(depth + 1);
    w[0] = vac;
    for (int n = 1; n <= depth; ++n) w[n] = R * w[n - 1];

    SpMat id(space.dim(), space.dim());
    id.setIdentity();
    for (int n = 1; n <= depth; ++n) {
        SpMat closed = (sparse_power(R, n) * SpMat(N + double(n) * id)).pruned();
        for (int k = 0; k < n; ++k)
            closed = closed - static_cast<double>(binomial(n, k))
                            * SpMat(sparse_power(R, n - k) * iter[k]);
        set.entries.push_back(ResidualEntry::checked(
            "iterated commutator closed form on the vacuum (n=" + std::to_string(n) + ")",
            ((iter[n] - closed) * vac).norm() / std::max(1.0, w[n].norm()), tol));
    }

    set.entries.push_back(ResidualEntry::checked(
        "first iterated commutator reproduces raising on the vacuum",
        (iter[1] * vac - R * vac).norm(), tol));
    for (int n = 2; n <= depth; ++n)
        set.entries.push_back(ResidualEntry::checked(
            "higher iterated commutator annihilates the vacuum (n=" + std::to_string(n)
                + ")",
            (iter[n] * vac).norm() / std::max(1.0, w[n].norm()), tol));
    return set;
}

VerificationReport full_report(const RunConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    validate_config(config);
    const FockSpace space = FockSpace::build(config.space);
    PhiFamily family = realize_phi(config);

    VerificationReport rep;
    rep.space = config.space;
    rep.dsf = config.dsf;
    rep.n_max = config.n_max;
    rep.tol = config.tol;
    rep.family_modes = family.modes();
    double spread = 0.0;
    rep.f = family_deformation_parameter(family, &spread);
    if (rep.f < 1e-12)
        fail(ErrorKind::Config,
             "config: the family has deformation parameter f = 0; the undeformed-boson "
             "case is excluded");

    const double q = config.space.q;
    rep.suites.push_back(verify_mode_relations(space, config.tol));
    rep.suites.push_back(classify(family, config.tol).details);

    if (q == 1.0) {
        // closed-form specs are probed a little past n_max; a tabulated spec
        // only guarantees values up to n_max + 2
        const int depth = config.dsf.variant == DsfVariant::Tabulated
                              ? config.n_max + 2
                              : std::max(config.n_max + 2, 8);
        const std::vector<double> table = dsf_table(config.dsf, depth);
        ResidualSet rec;
        rec.name = "structure_function_recurrences";
        rec.anchor = "binomial and three-term recurrences of the quadratic family";
        // the quadratic family is checked over its exact integer numerators;
        // a double-precision table loses the identity to cancellation noise
        // beyond n ~ 10
        const double binom_res =
            config.dsf.variant == DsfVariant::FermionicQuadratic
                ? check_binomial_recurrence_exact(config.dsf.m, depth).max_residual()
                : check_binomial_recurrence(table).max_residual();
        rec.entries.push_back(ResidualEntry::checked(
            "alternating binomial sums vanish", binom_res, 1e-12, depth - 2));
        rec.entries.push_back(ResidualEntry::checked(
            "three-term recurrence of the structure function",
            check_three_term_phi(table).max_residual(), 1e-12));
        rec.entries.push_back(ResidualEntry::checked(
            "three-term recurrence of the level energies",
            check_three_term_energy(table).max_residual(), 1e-12));
        rep.suites.push_back(rec);
    }
    if (config.dsf.variant != DsfVariant::Tabulated)
        rep.suites.push_back(check_chi_condition(config.dsf, std::max(config.n_max, 4)));

    rep.suites.push_back(
        weak_equality_suite(space, family, config.dsf, config.n_max, config.tol));

    {
        ResidualSet oracle;
        oracle.name = "ladder_oracle";
        oracle.anchor = "structure function read off consecutive ladder norms";
        for (int a = 0; a < family.modes(); ++a) {
            const OperatorPair pair = build_quasiboson(space, family.mats[a], a);
            const BruteForceResult bf = brute_force_phi(space, pair, config.n_max);
            double dev = 0.0, defect = 0.0;
            for (int i = 0; i < static_cast<int>(bf.values.size()); ++i) {
                dev = std::max(dev,
                               std::abs(bf.values[i] - unified_dsf(config.dsf, i + 1)));
                defect = std::max(defect, bf.defects[i]);
            }
            const std::string sfx = mode_suffix(a, family.modes());
            oracle.entries.push_back(ResidualEntry::checked(
                "empirical structure function" + sfx, dev, config.tol,
                static_cast<int>(bf.values.size())));
            oracle.entries.push_back(ResidualEntry::checked(
                "parallelism defect" + sfx, defect, config.tol,
                static_cast<int>(bf.defects.size())));
            if (bf.exhausted_at >= 0)
                oracle.entries.push_back(ResidualEntry::checked(
                    "null level at a structure-function zero" + sfx,
                    std::abs(unified_dsf(config.dsf, bf.exhausted_at)), config.tol, 1,
                    "ladder exhausted at n=" + std::to_string(bf.exhausted_at)));
            else
                oracle.entries.push_back(ResidualEntry::info(
                    "no null level up to n_max" + sfx, 0.0));
        }
        rep.suites.push_back(oracle);
    }

    if (q == 1.0) {
        for (int a = 0; a < family.modes(); ++a) {
            ResidualSet cascades = commutator_cascade_suite(
                space, family.mats[a], config.dsf, std::min(config.n_max + 1, 4));
            cascades.name += mode_suffix(a, family.modes());
            rep.suites.push_back(std::move(cascades));
            ResidualSet props = propositions_suite(space, family.mats[a], 4);
            props.name += mode_suffix(a, family.modes());
            rep.suites.push_back(std::move(props));
        }
    } else {
        rep.suites.push_back(check_example1(q, space.spec().cutoff));
        if (config.space.d_a == 2 && config.space.d_b == 2) {
            for (int a = 0; a < family.modes(); ++a) {
                if (std::abs(family.mats[a](0, 0)) < 1e-14) continue;
                ResidualSet two = check_example2(family.mats[a], q,
                                                 std::clamp(config.n_max, 2, 4));
                two.name += mode_suffix(a, family.modes());
                rep.suites.push_back(std::move(two));
            }
        }
        if (config.space.d_a <= 2 && config.space.d_b <= 2) {
            ResidualSet expansion;
            expansion.name = "annihilation_product_expansion";
            expansion.anchor = "A (A^dag)^n as a normally-reordered mode-word sum";
            const int n_hi = std::min({config.n_max, space.spec().cutoff, 3});
            for (int a = 0; a < family.modes(); ++a)
                for (int n = 1; n <= n_hi; ++n) {
                    ResidualSet one =
                        expand_annihilation_product(space, family.mats[a], n);
                    for (auto& e : one.entries) {
                        e.label += mode_suffix(a, family.modes());
                        expansion.entries.push_back(std::move(e));
                    }
                }
            rep.suites.push_back(std::move(expansion));
        }
    }

    rep.pass = true;
    for (const auto& s : rep.suites)
        if (!s.all_pass()) rep.pass = false;
    rep.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rep;
}

std::string report_to_json(const VerificationReport& report, const RunConfig& config) {
    ordered_json j;
    j["config"] = ordered_json::parse(config_to_json(config));
    ordered_json suites = ordered_json::array();
    for (const auto& s : report.suites) {
        ordered_json js;
        js["name"] = s.name;
        js["paper_ref"] = s.anchor;
        ordered_json rs = ordered_json::array();
        for (const auto& e : s.entries) {
            ordered_json je;
            je["label"] = e.label;
            je["value"] = e.value;
            je["tol"] = e.tol;
            je["pass"] = e.pass;
            rs.push_back(je);
        }
        js["residuals"] = rs;
        suites.push_back(js);
    }
    j["suites"] = suites;
    j["verdict"] = report.pass ? "pass" : "fail";
    return j.dump(2) + "\n";
}

} // namespace qb
