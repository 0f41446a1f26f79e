#ifndef QB_CORE_REPORT_HPP
#define QB_CORE_REPORT_HPP

#include <string>
#include <vector>

namespace qb {

// One measured residual. `tol` is the acceptance threshold the value was
// compared against; informational entries carry pass=true and tol<0.
struct ResidualEntry {
    std::string label;
    double value = 0.0;
    double tol = 0.0;
    bool pass = false;
    int probes = 0;          // number of states/pairs aggregated into `value`
    std::string note;

    static ResidualEntry checked(std::string label, double value, double tol,
                                 int probes = 0, std::string note = {}) {
        ResidualEntry e;
        e.label = std::move(label);
        e.value = value;
        e.tol = tol;
        e.pass = (value <= tol);
        e.probes = probes;
        e.note = std::move(note);
        return e;
    }
    static ResidualEntry info(std::string label, double value, std::string note = {}) {
        ResidualEntry e;
        e.label = std::move(label);
        e.value = value;
        e.tol = -1.0;
        e.pass = true;
        e.note = std::move(note);
        return e;
    }
};

// A named group of residuals produced by one checker. `anchor` identifies the
// relation family being tested (serialized under the report's paper_ref key).
struct ResidualSet {
    std::string name;
    std::string anchor;
    std::vector<ResidualEntry> entries;

    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
    double max_value() const {
        double m = 0.0;
        for (const auto& e : entries)
            if (e.tol >= 0.0 && e.value > m) m = e.value;
        return m;
    }
    const ResidualEntry* find(const std::string& label) const {
        for (const auto& e : entries)
            if (e.label == label) return &e;
        return nullptr;
    }
};

} // namespace qb

#endif
