#include "expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "composite.hpp"
#include "dsf.hpp"
#include "qerror.hpp"

namespace qb {

namespace {

// |P| <= 4^(n-1), so int64 stays exact through this depth
constexpr int kPTableCap = 30;

std::size_t p_index(int n_max, int n, int k, int l, int j) {
    const std::size_t s = n_max + 1;
    return ((static_cast<std::size_t>(n) * s + k) * s + l) * s + j;
}

cd cpow(cd base, int e) {
    cd r(1.0, 0.0);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

SpMat sparse_power(const SpMat& m, int e) {
    SpMat r(m.rows(), m.cols());
    r.setIdentity();
    for (int i = 0; i < e; ++i) r = (r * m).pruned();
    return r;
}

int odd_part(int n) { return (n % 2 != 0) ? 1 : 0; }  // (1 - (-1)^n)/2

} // namespace

long long PTable::at(int n, int k, int l, int j) const {
    if (n < 1 || n > n_max || k < 0 || k > n || l < 0 || l > n || j < 0 || j > n)
        return 0;
    return vals[p_index(n_max, n, k, l, j)];
}

PTable p_table(int n_max) {
    if (n_max < 1) fail(ErrorKind::Contract, "p_table: n_max must be >= 1");
    if (n_max > kPTableCap)
        fail(ErrorKind::Contract, "p_table: n_max beyond the exact int64 range (max "
                                  + std::to_string(kPTableCap) + ")");
    PTable t;
    t.n_max = n_max;
    const std::size_t s = n_max + 1;
    t.vals.assign(s * s * s * s, 0);

    t.vals[p_index(n_max, 1, 0, 0, 0)] = 1;
    t.vals[p_index(n_max, 1, 0, 1, 0)] = 1;
    t.vals[p_index(n_max, 1, 1, 0, 0)] = 1;
    t.vals[p_index(n_max, 1, 1, 1, 1)] = 1;

    // one recurrence with an out-of-support-reads-zero convention covers all
    // the boundary branches
    for (int n = 1; n < n_max; ++n) {
        const long long sk = (n % 2 == 0) ? -1 : 1;  // (-1)^(n+k-1) at k even
        for (int k = 0; k <= n + 1; ++k)
            for (int l = 0; l <= n + 1; ++l) {
                const int j_lo = std::max(0, k + l - (n + 1));
                const int j_hi = std::min(k, l);
                const long long sgn_k = (k % 2 == 0) ? sk : -sk;
                const long long sgn_l = (l % 2 == 0) ? sk : -sk;
                const long long sgn_kl = ((k + l) % 2 == 0) ? 1 : -1;
                for (int j = j_lo; j <= j_hi; ++j) {
                    const long long v = t.at(n, k, l, j)
                                      + sgn_k * t.at(n, k - 1, l, j)
                                      + sgn_l * t.at(n, k, l - 1, j)
                                      + sgn_kl * t.at(n, k - 1, l - 1, j - 1);
                    t.vals[p_index(n_max, n + 1, k, l, j)] = v;
                }
            }
    }
    return t;
}

long long p_closed_form(int n, int k, int l, int j) {
    if (n >= 1 && k >= 0 && l >= 0) {
        const int a = std::min(k, l), b = std::max(k, l);
        const long long nn = n;
        const long long odd = odd_part(n);
        const long long t = n - 1;
        const bool t_even = (t % 2 == 0);
        if (a == 0 && b == 1 && j == 0) return odd;
        if (a == 1 && b == 1 && j == 0) return -nn + odd;
        if (a == 1 && b == 1 && j == 1) return nn;
        if (a == 0 && b == 2 && j == 0) return nn / 2;
        if (a == 1 && b == 2 && j == 0) return t_even ? 3 * t / 2 : 0;
        if (a == 1 && b == 2 && j == 1) return t_even ? -t : 0;
        if (a == 2 && b == 2 && j == 0)
            return t_even ? 3 * (t / 2) * (t / 2 - 1) : 3 * ((t - 1) / 2) * ((t + 1) / 2);
        if (a == 2 && b == 2 && j == 1) return t_even ? t - t * t : 1 - t * t;
        if (a == 2 && b == 2 && j == 2) return t * (t + 1) / 2;
    }
    std::ostringstream os;
    os << "p_closed_form: no closed form covers (n=" << n << ", k=" << k
       << ", l=" << l << ", j=" << j << ")";
    fail(ErrorKind::Range, os.str());
}

std::string p_table_csv(int n_max) {
    const PTable t = p_table(n_max);
    std::ostringstream os;
    os << "n,k,l,j,value\n";
    for (int n = 1; n <= n_max; ++n)
        for (int k = 0; k <= n; ++k)
            for (int l = 0; l <= n; ++l)
                for (int j = std::max(0, k + l - n); j <= std::min(k, l); ++j)
                    os << n << "," << k << "," << l << "," << j << ","
                       << t.at(n, k, l, j) << "\n";
    return os.str();
}

cd CTable::at(int n, int k, int l) const {
    if (n < 0 || n > n_max || k < 0 || k > n || l < 0 || l > n) return cd(0.0, 0.0);
    const std::size_t s = n_max + 1;
    return vals[(static_cast<std::size_t>(n) * s + k) * s + l];
}

CTable c_table(const Eigen::MatrixXcd& phi, int n_max) {
    if (phi.rows() != 2 || phi.cols() != 2)
        fail(ErrorKind::Contract, "c_table: needs a 2x2 Phi");
    if (n_max < 0) fail(ErrorKind::Contract, "c_table: n_max must be >= 0");
    const PTable pt = p_table(std::max(1, n_max));

    CTable ct;
    ct.n_max = n_max;
    const std::size_t s = n_max + 1;
    ct.vals.assign(s * s * s, cd(0.0, 0.0));
    for (int n = 0; n <= n_max; ++n)
        for (int k = 0; k <= n; ++k)
            for (int l = 0; l <= n; ++l) {
                cd sum(0.0, 0.0);
                if (n == 0) {
                    sum = cd(1.0, 0.0);
                } else {
                    for (int j = std::max(0, k + l - n); j <= std::min(k, l); ++j) {
                        const long long p = pt.at(n, k, l, j);
                        if (p == 0) continue;
                        sum += static_cast<double>(p) * cpow(phi(1, 1), j)
                             * cpow(phi(1, 0), k - j) * cpow(phi(0, 1), l - j)
                             * cpow(phi(0, 0), n - k - l + j);
                    }
                }
                ct.vals[(static_cast<std::size_t>(n) * s + k) * s + l] = sum;
            }
    return ct;
}

CTable c_table_oracle(const Eigen::MatrixXcd& phi, double q, int n_max) {
    if (phi.rows() != 2 || phi.cols() != 2)
        fail(ErrorKind::Contract, "c_table_oracle: needs a 2x2 Phi");
    if (q >= 1.0)
        fail(ErrorKind::Contract,
             "c_table_oracle: two-level q = 1 modes cannot hold the occupancies the "
             "projection needs; use q < 1");
    if (n_max < 0) fail(ErrorKind::Contract, "c_table_oracle: n_max must be >= 0");

    const FockSpace space = FockSpace::build({2, 2, q, std::max(1, n_max)});
    const OperatorPair pair = build_quasiboson(space, phi);
    const SpMat cre_a1 = creation_operator(space, space.a_mode(0)).mat;
    const SpMat cre_a2 = creation_operator(space, space.a_mode(1)).mat;
    const SpMat cre_b1 = creation_operator(space, space.b_mode(0)).mat;
    const SpMat cre_b2 = creation_operator(space, space.b_mode(1)).mat;

    CTable ct;
    ct.n_max = n_max;
    const std::size_t s = n_max + 1;
    ct.vals.assign(s * s * s, cd(0.0, 0.0));
    ct.vals[0] = cd(1.0, 0.0);

    Eigen::VectorXcd w = vacuum_vector(space);
    for (int n = 1; n <= n_max; ++n) {
        w = pair.raise.mat * w;
        const double sign = (n * (n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        for (int k = 0; k <= n; ++k)
            for (int l = 0; l <= n; ++l) {
                // ordered monomial (a2+)^k (a1+)^(n-k) (b2+)^l (b1+)^(n-l) |O>
                Eigen::VectorXcd u = vacuum_vector(space);
                for (int i = 0; i < n - l; ++i) u = cre_b1 * u;
                for (int i = 0; i < l; ++i) u = cre_b2 * u;
                for (int i = 0; i < n - k; ++i) u = cre_a1 * u;
                for (int i = 0; i < k; ++i) u = cre_a2 * u;
                const double nrm2 = u.squaredNorm();
                if (nrm2 < 1e-300)
                    fail(ErrorKind::Contract, "c_table_oracle: basis monomial vanished");
                ct.vals[(static_cast<std::size_t>(n) * s + k) * s + l] =
                    sign * u.dot(w) / nrm2;
            }
    }
    return ct;
}

ResidualSet expand_annihilation_product(const FockSpace& space,
                                        const Eigen::MatrixXcd& phi, int n) {
    const int d_a = space.spec().d_a;
    const int d_b = space.spec().d_b;
    if (phi.rows() != d_a || phi.cols() != d_b)
        fail(ErrorKind::Contract, "expand_annihilation_product: Phi shape mismatch");
    if (n < 1) fail(ErrorKind::Contract, "expand_annihilation_product: n must be >= 1");
    if (n > space.spec().cutoff)
        fail(ErrorKind::Contract,
             "expand_annihilation_product: n quanta overflow the cutoff; no interior "
             "subspace is left to compare on");

    const double q = space.spec().q;
    std::vector<SpMat> cre_a(d_a), ann_a(d_a), cre_b(d_b), ann_b(d_b);
    for (int mu = 0; mu < d_a; ++mu) {
        cre_a[mu] = creation_operator(space, space.a_mode(mu)).mat;
        ann_a[mu] = annihilation_operator(space, space.a_mode(mu)).mat;
    }
    for (int nu = 0; nu < d_b; ++nu) {
        cre_b[nu] = creation_operator(space, space.b_mode(nu)).mat;
        ann_b[nu] = annihilation_operator(space, space.b_mode(nu)).mat;
    }

    // raising word -> matrix product, built left to right
    auto word_matrix = [&](const std::vector<int>& word, const std::vector<SpMat>& cre) {
        SpMat m(space.dim(), space.dim());
        m.setIdentity();
        for (int r : word) m = (m * cre[r]).pruned();
        return m;
    };

    // pull one lowering operator of the given mode through the raising word:
    // every hit deletes a letter with an alternating sign and a q-weight for
    // the same-mode letters already passed; the miss term keeps the word and
    // a trailing lowering operator
    std::map<std::pair<int, std::vector<int>>, SpMat> memo_a, memo_b;
    auto pull_through = [&](int mode, const std::vector<int>& word,
                            const std::vector<SpMat>& cre, const std::vector<SpMat>& ann,
                            std::map<std::pair<int, std::vector<int>>, SpMat>& memo) {
        const auto key = std::make_pair(mode, word);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        SpMat sum(space.dim(), space.dim());
        int same_before = 0;
        for (int i = 0; i < static_cast<int>(word.size()); ++i) {
            if (word[i] == mode) {
                std::vector<int> rest(word);
                rest.erase(rest.begin() + i);
                const double w = (i % 2 == 0 ? 1.0 : -1.0) * std::pow(q, same_before);
                sum += w * word_matrix(rest, cre);
                ++same_before;
            }
        }
        const double w_miss = (word.size() % 2 == 0 ? 1.0 : -1.0)
                            * std::pow(q, same_before);
        sum += w_miss * SpMat(word_matrix(word, cre) * ann[mode]);
        memo.emplace(key, sum);
        return sum;
    };

    const OperatorPair pair = build_quasiboson(space, phi);
    const SpMat lhs = (pair.lower.mat * sparse_power(pair.raise.mat, n)).pruned();

    SpMat rhs(space.dim(), space.dim());
    std::vector<int> wa(n, 0), wb(n, 0);
    long long words = 0;
    for (;;) {  // odometer over the a-word
        for (;;) {  // odometer over the b-word
            cd prod(1.0, 0.0);
            for (int l = 0; l < n; ++l) prod *= phi(wa[l], wb[l]);
            if (prod != cd(0.0, 0.0)) {
                ++words;
                for (int mu = 0; mu < d_a; ++mu)
                    for (int nu = 0; nu < d_b; ++nu) {
                        const cd c = std::conj(phi(mu, nu)) * prod;
                        if (c == cd(0.0, 0.0)) continue;
                        rhs += c * SpMat(pull_through(mu, wa, cre_a, ann_a, memo_a)
                                         * pull_through(nu, wb, cre_b, ann_b, memo_b));
                    }
            }
            int i = n - 1;
            while (i >= 0 && wb[i] == d_b - 1) wb[i--] = 0;
            if (i < 0) break;
            ++wb[i];
        }
        int i = n - 1;
        while (i >= 0 && wa[i] == d_a - 1) wa[i--] = 0;
        if (i < 0) break;
        ++wa[i];
    }
    const double sign = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    rhs = sign * rhs;

    const SpMat interior = interior_projector(space, n).mat;
    const double resid = spectral_norm(SpMat((lhs - rhs) * interior));

    ResidualSet set;
    set.name = "annihilation_product_expansion";
    set.anchor = "A (A^dag)^n as a normally-reordered mode-word sum";
    set.entries.push_back(ResidualEntry::checked(
        "closed form matches direct product (interior, n=" + std::to_string(n) + ")",
        resid, 1e-11, static_cast<int>(words)));
    return set;
}

ResidualSet check_example1(double q, int cutoff) {
    if (q >= 1.0)
        fail(ErrorKind::Contract, "check_example1: the single-mode ladder needs q < 1");
    const FockSpace space = FockSpace::build({1, 1, q, cutoff});
    Eigen::MatrixXcd phi(1, 1);
    phi(0, 0) = cd(1.0, 0.0);
    const OperatorPair pair = build_quasiboson(space, phi);
    const SpMat aad = (pair.lower.mat * pair.raise.mat).pruned();

    ResidualSet set;
    set.name = "single_mode_ladder";
    set.anchor = "A A^dag = [n+1]^2 on level states of one constituent mode";
    Eigen::VectorXcd w = vacuum_vector(space);
    double worst = 0.0;
    for (int n = 0; n < cutoff; ++n) {
        if (n > 0) w = pair.raise.mat * w;
        const double nrm = w.norm();
        const double expect = qfermionic_dsf(q, n + 1);
        const double r = (aad * w - expect * w).norm() / nrm;
        worst = std::max(worst, r);
        const double recovered = std::real(w.dot(aad * w)) / (nrm * nrm);
        set.entries.push_back(ResidualEntry::info(
            "recovered eigenvalue at level " + std::to_string(n), recovered));
    }
    set.entries.push_back(ResidualEntry::checked(
        "squared-bracket eigenvalue law", worst, 1e-10, cutoff));
    return set;
}

std::vector<cd> example2_dsf(const Eigen::MatrixXcd& phi, double q, int n_max) {
    if (phi.rows() != 2 || phi.cols() != 2)
        fail(ErrorKind::Contract, "example2_dsf: needs a 2x2 Phi");
    if (std::abs(phi(0, 0)) < 1e-14)
        fail(ErrorKind::Domain,
             "example2_dsf: the reference entry Phi(1,1) must be nonzero for the "
             "closed form");
    const cd p11 = phi(0, 0), p12 = phi(0, 1), p21 = phi(1, 0), p22 = phi(1, 1);
    std::vector<cd> out(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        const double odd = odd_part(n);
        const double br = q_bracket(n, q);
        out[n] = (odd - static_cast<double>(n)) * std::conj(p22) * p21 * p12 / p11
               + static_cast<double>(n) * std::norm(p22)
               + odd * br * (std::norm(p21) + std::norm(p12))
               + br * br * std::norm(p11);
    }
    return out;
}

ResidualSet check_example2(const Eigen::MatrixXcd& phi, double q, int n_max) {
    if (phi.rows() != 2 || phi.cols() != 2)
        fail(ErrorKind::Contract, "check_example2: needs a 2x2 Phi");
    if (q >= 1.0) fail(ErrorKind::Contract, "check_example2: the system assumes q < 1");
    if (n_max < 1) fail(ErrorKind::Contract, "check_example2: n_max must be >= 1");

    const CTable ct = c_table(phi, n_max + 1);
    const std::vector<cd> dsf = example2_dsf(phi, q, n_max + 1);
    const cd p11 = phi(0, 0), p12 = phi(0, 1), p21 = phi(1, 0), p22 = phi(1, 1);

    double worst_all = 0.0, worst_row = 0.0, worst_col = 0.0, worst_diag = 0.0,
           worst_cross = 0.0;
    int probes = 0;
    for (int n = 1; n <= n_max; ++n)
        for (int k = 0; k <= n; ++k)
            for (int l = 0; l <= n; ++l) {
                const double sl = (l % 2 == 0) ? 1.0 : -1.0;
                const double sk = (k % 2 == 0) ? 1.0 : -1.0;
                const cd t1 = q_bracket(k + 1, q) * q_bracket(l + 1, q)
                            * std::conj(p22) * ct.at(n + 1, k + 1, l + 1);
                const cd t2 = sl * q_bracket(k + 1, q) * q_bracket(n + 1 - l, q)
                            * std::conj(p21) * ct.at(n + 1, k + 1, l);
                const cd t3 = sk * q_bracket(n + 1 - k, q) * q_bracket(l + 1, q)
                            * std::conj(p12) * ct.at(n + 1, k, l + 1);
                const cd t4 = sk * sl * q_bracket(n + 1 - k, q) * q_bracket(n + 1 - l, q)
                            * std::conj(p11) * ct.at(n + 1, k, l);
                const cd t5 = -dsf[n + 1] * ct.at(n, k, l);
                const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3),
                                               std::abs(t4), std::abs(t5)});
                const double rel =
                    scale < 1e-300 ? 0.0 : std::abs(t1 + t2 + t3 + t4 + t5) / scale;
                ++probes;
                worst_all = std::max(worst_all, rel);
                if (k == 0 && l == 0) worst_diag = std::max(worst_diag, rel);
                if (k >= 1 && l == 0) worst_row = std::max(worst_row, rel);
                if (k == 0 && l >= 1) worst_col = std::max(worst_col, rel);
                if (k == 1 && l == 1) worst_cross = std::max(worst_cross, rel);
            }

    ResidualSet set;
    set.name = "two_mode_lowering_system";
    set.anchor = "coefficient system for A (A^dag)^(n+1)|O> = phi(n+1) (A^dag)^n|O>";
    set.entries.push_back(ResidualEntry::checked(
        "full equation system (relative)", worst_all, 1e-10, probes));
    set.entries.push_back(ResidualEntry::checked(
        "diagonal equations k = l = 0 (fix the structure function)", worst_diag, 1e-10,
        n_max));
    set.entries.push_back(ResidualEntry::checked(
        "equations with k >= 1, l = 0 (force Phi(2,1) to vanish)", worst_row, 1e-10));
    set.entries.push_back(ResidualEntry::checked(
        "equations with k = 0, l >= 1 (force Phi(1,2) to vanish)", worst_col, 1e-10));
    set.entries.push_back(ResidualEntry::checked(
        "equation at k = l = 1 (force Phi(2,2) to vanish)", worst_cross, 1e-10));
    for (int n = 1; n <= std::min(6, n_max + 1); ++n)
        set.entries.push_back(ResidualEntry::info(
            "recovered structure function at n=" + std::to_string(n),
            std::real(dsf[n]),
            std::abs(std::imag(dsf[n])) > 1e-12 ? "nonzero imaginary part" : ""));
    return set;
}

ResidualSet check_sequence_independence(double q) {
    Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
    for (int n = 2; n <= 8; ++n) {
        const double odd = odd_part(n);
        const double br = q_bracket(n, q);
        Eigen::Vector3d s(n - odd, (br - odd) * (br - odd), odd * (br - 1.0));
        gram += s * s.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(gram);
    const double lead = es.eigenvalues().maxCoeff();
    int rank = 0;
    for (int i = 0; i < 3; ++i)
        if (es.eigenvalues()[i] > 1e-10 * lead) ++rank;

    ResidualSet set;
    set.name = "parameter_sequence_independence";
    set.anchor = "linear independence of the three parameterized-DSF sequences";
    set.entries.push_back(ResidualEntry::checked(
        "Gram rank deficiency over n = 2..8", 3.0 - rank, 0.5, 7));
    set.entries.push_back(ResidualEntry::info(
        "relative smallest Gram eigenvalue", es.eigenvalues().minCoeff() / lead));
    return set;
}

} // namespace qb
