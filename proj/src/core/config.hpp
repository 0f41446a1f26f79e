#ifndef QB_CORE_CONFIG_HPP
#define QB_CORE_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "dsf.hpp"
#include "fock.hpp"
#include "phi.hpp"

namespace qb {

// One verification run: the constituent space, where the coefficient family
// comes from, the structure function to test against, and the probe depth.
struct RunConfig {
    ModeSpec space;

    enum class PhiSource { Block, File, OneHot };
    PhiSource source = PhiSource::Block;
    int m = 1;      // Block: diagonal block size
    int modes = 1;  // Block / OneHot: family size
    std::optional<std::uint64_t> seed;  // Block: Haar unitaries; absent = identities
    std::string path;                   // File: family JSON

    DsfSpec dsf;
    int n_max = 2;
    double tol = 1e-10;
    double rank_tol = 1e-9;
};

// Pairing and capacity rules; throws a config error naming the offending
// field. The quadratic family belongs to q = 1 constituents, the q-fermion
// square and the parameterized family to q < 1 with matching q; block
// generation only makes sense at q = 1, one-hot families at q < 1; a q < 1
// ladder of depth n_max needs cutoff >= n_max.
void validate_config(const RunConfig& config);

// Build or load the family the config names, and check it fits the space.
PhiFamily realize_phi(const RunConfig& config);

// {"space": {"d_a", "d_b", "q", "cutoff"},
//  "phi": {"kind": "block"|"file"|"one_hot", ...},
//  "dsf": {"variant", ...}, "n_max", "tol", "rank_tol"}
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& config);

} // namespace qb

#endif
