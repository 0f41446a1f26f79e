#include "dsf.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "qerror.hpp"

namespace qb {

namespace {

void require_level(int n) {
    if (n < 0) fail(ErrorKind::Domain, "level n must be nonnegative, got " + std::to_string(n));
}

void require_q_open(double q) {
    // open interval: the q = 1 ladder belongs to the quadratic family instead
    if (!(q > -1.0 && q < 1.0))
        fail(ErrorKind::Domain, "q must lie in (-1, 1), got " + std::to_string(q));
}

double parity_indicator(int n) { return (n % 2 == 0) ? 0.0 : 1.0; }

} // namespace

double q_bracket(int n, double q) {
    require_level(n);
    if (!(q > -1.0 && q <= 1.0))
        fail(ErrorKind::Domain, "q must lie in (-1, 1], got " + std::to_string(q));
    if (n == 0) return 0.0;
    if (q == 0.0) return 1.0;  // theta(n) branch, avoids pow(0, 0) edge cases
    return (1.0 - std::pow(-q, n)) / (1.0 + q);
}

double ladder_norm_sq(int k, double q) {
    require_level(k);
    double prod = 1.0;
    for (int j = 1; j <= k; ++j) prod *= q_bracket(j, q);
    return prod;
}

DsfSpec DsfSpec::fermionic(int m) {
    DsfSpec s;
    s.variant = DsfVariant::FermionicQuadratic;
    s.m = m;
    return s;
}

DsfSpec DsfSpec::q_fermion(double q) {
    DsfSpec s;
    s.variant = DsfVariant::QFermionSquare;
    s.q = q;
    return s;
}

DsfSpec DsfSpec::parameterized(double q, double p1, double p2, double p3) {
    DsfSpec s;
    s.variant = DsfVariant::Parameterized;
    s.q = q;
    s.p1 = p1;
    s.p2 = p2;
    s.p3 = p3;
    return s;
}

DsfSpec DsfSpec::tabulated(std::vector<double> values) {
    DsfSpec s;
    s.variant = DsfVariant::Tabulated;
    s.values = std::move(values);
    return s;
}

double fermionic_dsf(int m, int n) {
    require_level(n);
    if (m < 1) fail(ErrorKind::Domain, "m must be a positive integer, got " + std::to_string(m));
    double dn = n;
    return (1.0 + 1.0 / m) * dn - dn * dn / m;
}

double qfermionic_dsf(double q, int n) {
    require_level(n);
    require_q_open(q);
    double b = q_bracket(n, q);
    return b * b;
}

double parameterized_dsf(double q, double p1, double p2, double p3, int n) {
    require_level(n);
    require_q_open(q);
    double sigma = parity_indicator(n);
    double b = q_bracket(n, q);
    return n - (n - sigma) * p1 + (b - sigma) * (b - sigma) * p2 + sigma * (b - 1.0) * p3;
}

double unified_dsf(const DsfSpec& spec, int n) {
    require_level(n);
    switch (spec.variant) {
        case DsfVariant::FermionicQuadratic:
            return fermionic_dsf(spec.m, n);
        case DsfVariant::QFermionSquare:
            return qfermionic_dsf(spec.q, n);
        case DsfVariant::Parameterized:
            return parameterized_dsf(spec.q, spec.p1, spec.p2, spec.p3, n);
        case DsfVariant::Tabulated:
            if (n >= static_cast<int>(spec.values.size()))
                fail(ErrorKind::Range, "tabulated values end before n = " + std::to_string(n));
            return spec.values[static_cast<std::size_t>(n)];
    }
    fail(ErrorKind::Domain, "unknown structure function variant");
}

double dsf_energy(const DsfSpec& spec, int n) {
    return 0.5 * (unified_dsf(spec, n) + unified_dsf(spec, n + 1));
}

std::vector<double> dsf_table(const DsfSpec& spec, int n_max) {
    if (n_max < 0) fail(ErrorKind::Domain, "n_max must be nonnegative");
    std::vector<double> t(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) t[static_cast<std::size_t>(n)] = unified_dsf(spec, n);
    return t;
}

std::int64_t binomial(int n, int k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (n > 61) fail(ErrorKind::Range, "binomial(n, k) supported up to n = 61 only");
    // Pascal row, exact in 64-bit for n <= 61
    std::vector<std::int64_t> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
    return row[static_cast<std::size_t>(k)];
}

double RecurrenceReport::max_residual() const {
    double m = 0.0;
    for (double r : residuals)
        if (r > m) m = r;
    return m;
}

double RecurrenceReport::residual_at(int n) const {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == n) return residuals[i];
    fail(ErrorKind::Range, "recurrence not evaluated at n = " + std::to_string(n));
}

RecurrenceReport check_binomial_recurrence(const std::vector<double>& phi) {
    RecurrenceReport rep;
    int top = static_cast<int>(phi.size()) - 1;
    for (int n = 2; n + 1 <= top; ++n) {
        double acc = 0.0;
        for (int k = 0; k <= n; ++k) {
            double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
            acc += sign * static_cast<double>(binomial(n + 1, k)) * phi[static_cast<std::size_t>(k)];
        }
        rep.levels.push_back(n);
        rep.residuals.push_back(std::fabs(phi[static_cast<std::size_t>(n) + 1] - acc));
    }
    return rep;
}

RecurrenceReport check_binomial_recurrence_exact(int m, int top) {
    if (m < 1) fail(ErrorKind::Domain, "the family needs m >= 1");
    if (m > 100 || top > 40)
        fail(ErrorKind::Range,
             "check_binomial_recurrence_exact: m <= 100 and top <= 40 keep the "
             "integer sums inside 64 bits");
    // numerator of phi(k) = k(m+1-k)/m over the fixed denominator m
    auto num = [m](long long k) { return k * (m + 1 - k); };
    RecurrenceReport rep;
    for (int n = 2; n + 1 <= top; ++n) {
        long long acc = 0;
        for (int k = 0; k <= n; ++k) {
            long long sign = ((n - k) % 2 == 0) ? 1 : -1;
            acc += sign * binomial(n + 1, k) * num(k);
        }
        rep.levels.push_back(n);
        rep.residuals.push_back(static_cast<double>(std::llabs(num(n + 1) - acc)) / m);
    }
    return rep;
}

RecurrenceReport check_three_term_phi(const std::vector<double>& phi) {
    RecurrenceReport rep;
    int top = static_cast<int>(phi.size()) - 1;
    if (top >= 2) rep.skipped.push_back(1);  // (n+1)/(n-1) undefined at n = 1
    for (int n = 2; n + 1 <= top; ++n) {
        double pred = 2.0 * (n + 1.0) / n * phi[static_cast<std::size_t>(n)] -
                      (n + 1.0) / (n - 1.0) * phi[static_cast<std::size_t>(n) - 1];
        rep.levels.push_back(n);
        rep.residuals.push_back(std::fabs(phi[static_cast<std::size_t>(n) + 1] - pred));
    }
    return rep;
}

RecurrenceReport check_three_term_energy(const std::vector<double>& phi) {
    RecurrenceReport rep;
    int top = static_cast<int>(phi.size()) - 1;
    auto energy = [&phi](int n) {
        return 0.5 * (phi[static_cast<std::size_t>(n)] + phi[static_cast<std::size_t>(n) + 1]);
    };
    // E_{n+1} known once phi(n+2) is in the table; 2n^2 - 1 never vanishes for n >= 1
    for (int n = 1; n + 2 <= top; ++n) {
        double dn = n;
        double pred = ((4.0 * dn * dn + 4.0 * dn - 4.0) * energy(n) -
                       (2.0 * dn * dn + 4.0 * dn + 1.0) * energy(n - 1)) /
                      (2.0 * dn * dn - 1.0);
        rep.levels.push_back(n);
        rep.residuals.push_back(std::fabs(energy(n + 1) - pred));
    }
    return rep;
}

std::string dsf_table_csv(const DsfSpec& spec, int n_max) {
    if (n_max < 0) fail(ErrorKind::Domain, "n_max must be nonnegative");
    // residual columns need phi out to n_max + 2
    std::vector<double> phi = dsf_table(spec, n_max + 2);
    RecurrenceReport three = check_three_term_phi(phi);
    RecurrenceReport energy = check_three_term_energy(phi);

    auto fmt = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };
    auto lookup = [](const RecurrenceReport& rep, int n) -> std::string {
        for (std::size_t i = 0; i < rep.levels.size(); ++i)
            if (rep.levels[i] == n) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", rep.residuals[i]);
                return std::string(buf);
            }
        return "";
    };

    std::string out = "n,phi,energy,phi_three_term_residual,energy_recurrence_residual\n";
    for (int n = 0; n <= n_max; ++n) {
        out += std::to_string(n);
        out += ',';
        out += fmt(phi[static_cast<std::size_t>(n)]);
        out += ',';
        out += fmt(0.5 * (phi[static_cast<std::size_t>(n)] + phi[static_cast<std::size_t>(n) + 1]));
        out += ',';
        out += lookup(three, n);
        out += ',';
        out += lookup(energy, n);
        out += '\n';
    }
    return out;
}

std::string dsf_variant_name(DsfVariant v) {
    switch (v) {
        case DsfVariant::FermionicQuadratic: return "fermionic_quadratic";
        case DsfVariant::QFermionSquare: return "q_fermion_square";
        case DsfVariant::Parameterized: return "parameterized";
        case DsfVariant::Tabulated: return "tabulated";
    }
    return "unknown";
}

DsfVariant dsf_variant_from_name(const std::string& name) {
    if (name == "fermionic_quadratic") return DsfVariant::FermionicQuadratic;
    if (name == "q_fermion_square") return DsfVariant::QFermionSquare;
    if (name == "parameterized") return DsfVariant::Parameterized;
    if (name == "tabulated") return DsfVariant::Tabulated;
    fail(ErrorKind::Config, "unknown structure function variant '" + name + "'");
}

} // namespace qb
